// ============================================================================
// trace.hpp — ultimately periodic interpretations (lassos) and LTL evaluation
// ============================================================================

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "bqltl/formula.hpp"

namespace bqltl {

using Letter = std::set<std::string>;  // subset of a trace universe

// Ultimately periodic interpretation: stem followed by a repeating loop.
// letter(i) for i >= |stem| is loop[(i - |stem|) mod |loop|].
struct LassoTrace {
  VarSet universe;
  std::vector<Letter> stem;
  std::vector<Letter> loop;  // nonempty

  std::size_t period_start() const { return stem.size(); }
  std::size_t num_positions() const { return stem.size() + loop.size(); }
};

LassoTrace make_lasso(VarSet universe, std::vector<Letter> stem,
                      std::vector<Letter> loop);

const Letter& letter(const LassoTrace& pi, std::size_t i);

// Index of position i among the finitely many distinct positions
// 0..|stem|+|loop|-1.
std::size_t normalize_position(const LassoTrace& pi, std::size_t i);

LassoTrace project(const LassoTrace& pi, const VarSet& keep);
LassoTrace project_out(const LassoTrace& pi, const VarSet& drop);

// Union of two interpretations over disjoint universes; stems are aligned and
// the loop length is the lcm of the input loop lengths.
LassoTrace combine(const LassoTrace& a, const LassoTrace& b);

// Rotate the loop by k (stem unchanged); eval(m, rotate(pi,k), i) must equal
// eval(m, pi, i+k) for i >= |stem|.
LassoTrace rotate_loop(const LassoTrace& pi, std::size_t k);

bool lasso_equal(const LassoTrace& a, const LassoTrace& b);

// Classic LTL semantics on a lasso, exact: eventualities are resolved by
// scanning at most |stem| + 2|loop| positions past the (normalized) start.
bool eval_ltl(const MatrixPtr& m, const LassoTrace& pi, std::size_t i);

// All lassos over `universe` with the given stem/loop lengths, letters
// enumerated in a fixed order. Used by oracles; keep the bounds tiny.
std::vector<LassoTrace> enumerate_lassos(const VarSet& universe,
                                         std::size_t max_stem,
                                         std::size_t max_loop);

std::string lasso_to_json(const LassoTrace& pi);
LassoTrace lasso_from_json(const std::string& text);

}  // namespace bqltl
