// ============================================================================
// skolem.hpp — finite-memory witness machines for existential blocks
// ============================================================================
//
// One Mealy machine per existential block.  At instant k the machine emits
// output(mem_k, current dep_now letter) and then advances with
// update(mem_k, current inputs letter); memory therefore summarizes the
// strict past of `inputs` while `dep_now` grants same-instant visibility.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bqltl/formula.hpp"
#include "bqltl/trace.hpp"
#include "bqltl/tree.hpp"

namespace bqltl {

enum class Mode { Behavioral, WeakBehavioral };

struct MealySkolem {
  VarSet block;    // the existential variables this machine assigns
  VarSet inputs;   // past visibility (update)
  VarSet dep_now;  // present visibility (output)
  int memory = 1;
  int initial = 0;
  std::vector<std::vector<int>> update;            // [mem][inputs letter]
  std::vector<std::vector<std::uint32_t>> output;  // [mem][dep_now letter]
};

using MealyFamily = std::vector<MealySkolem>;

enum class Status { Sat, Unsat, Unknown };

struct Verdict {
  Status status = Status::Unknown;
  std::optional<MealyFamily> family;
  std::optional<RegularTree> tree;            // behavioral pipeline witness
  std::optional<LassoTrace> witness_lasso;    // classic leading-E witness
  std::optional<LassoTrace> counterexample;
};

// A regular tree over dirs Dep(Y) with Y-labels, read with Mealy timing.
MealySkolem mealy_from_tree(const RegularTree& t);
RegularTree tree_from_mealy(const MealySkolem& m);

// Zero-visibility machine replaying a fixed lasso over the block variables.
MealySkolem constant_mealy(const LassoTrace& values);

// Extends an interpretation of the free/universal variables.
LassoTrace apply(const MealyFamily& family, const LassoTrace& pi);

bool check_conformance(const MealyFamily& family,
                       const std::vector<QuantBlock>& prefix, Mode mode);

struct ValidateResult {
  bool ok = false;
  std::optional<LassoTrace> counterexample;  // over the universal variables
};

// Exact over all universal traces, not just lassos: product with the
// automaton of the negated matrix, then emptiness.
ValidateResult validate(const MealyFamily& family, const MatrixPtr& matrix,
                        const std::vector<QuantBlock>& prefix);

// Bounded exhaustive search over machine families in a fixed order
// (memory size first, then lexicographic tables, last block fastest).
Verdict enumerate_oracle(const QuantifiedFormula& f, Mode mode, int memory_bound,
                         long long candidate_cap = 300000);

// Splits a joint output tree into per-block trees over their dependency
// directions; throws std::invalid_argument when some block's labels depend
// on directions outside its visibility.
std::vector<RegularTree> decompose(const RegularTree& joint,
                                   const std::vector<QuantBlock>& prefix);

std::string mealy_to_json(const MealySkolem& m);
MealySkolem mealy_from_json(const std::string& text);

}  // namespace bqltl
