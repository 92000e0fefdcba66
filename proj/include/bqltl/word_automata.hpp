// ============================================================================
// word_automata.hpp — omega-word automata over subset alphabets
// ============================================================================
//
// Letters are indices 0..num_letters-1.  For formula-facing automata the
// alphabet is 2^alphabet_vars and a letter's bit i is variable
// alphabet_vars[i]; internal constructions (the tree-automata breakpoint
// alphabets) use a bare letter count with empty alphabet_vars.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bqltl/errors.hpp"
#include "bqltl/formula.hpp"
#include "bqltl/trace.hpp"

namespace bqltl {

// Automata with explicit letters keep their variable count small; anything
// bigger must go through a symbolic representation we deliberately don't have.
inline constexpr std::size_t kMaxAlphabetVars = 6;

std::size_t letter_count(const VarSet& vars);  // throws ResourceError on cap
std::uint32_t letter_index(const VarSet& vars, const Letter& l);
Letter letter_set(const VarSet& vars, std::uint32_t index);

// Nondeterministic Buchi word automaton.
struct Nbw {
  VarSet alphabet_vars;
  std::size_t num_letters = 1;
  int num_states = 0;
  int initial = 0;
  // delta[state][letter] = sorted successor list (possibly empty).
  std::vector<std::vector<std::vector<int>>> delta;
  std::vector<bool> accepting;

  std::vector<int>& succs(int q, std::uint32_t a) { return delta[q][a]; }
  const std::vector<int>& succs(int q, std::uint32_t a) const { return delta[q][a]; }
};

Nbw make_nbw(VarSet alphabet_vars, int num_states, int initial);

// Deterministic parity word automaton, MAX-parity: a run is accepting iff the
// highest color visited infinitely often is even.
struct Dpw {
  VarSet alphabet_vars;
  std::size_t num_letters = 1;
  int num_states = 0;
  int initial = 0;
  std::vector<std::vector<int>> delta;  // [state][letter] -> state, total
  std::vector<int> color;
};

// Nondeterministic parity (internal: complement route and tree machinery).
struct Npw {
  VarSet alphabet_vars;
  std::size_t num_letters = 1;
  int num_states = 0;
  int initial = 0;
  std::vector<std::vector<std::vector<int>>> delta;
  std::vector<int> color;  // max-even
};

// --- constructions ---------------------------------------------------------

// Tableau construction; the matrix is normalized with to_nnf internally.
// L(result) = { pi : eval_ltl(m, pi, 0) }.
Nbw ltl_to_nbw(const MatrixPtr& m, const VarSet& alphabet_vars);

// Intersection (two-track counting construction).
Nbw product(const Nbw& a, const Nbw& b);

// Existential projection: drops X from the alphabet, unioning transitions.
Nbw project_exists(const Nbw& a, const VarSet& x);

// Complement via determinization: prune, Piterman, color shift, parity->Buchi.
Nbw complement(const Nbw& a, int state_cap = 0);

// Reachability + liveness pruning and bisimulation quotient.
Nbw prune(const Nbw& a);

Npw dpw_to_npw(const Dpw& d);
Nbw npw_to_nbw(const Npw& p);

struct EmptinessResult {
  bool empty = true;
  std::optional<LassoTrace> witness;  // set when nonempty and vars are real
  std::vector<std::uint32_t> stem_letters, loop_letters;  // always set if nonempty
};

EmptinessResult emptiness(const Nbw& a);

bool nbw_accepts_lasso(const Nbw& a, const LassoTrace& pi);
bool dpw_accepts_lasso(const Dpw& d, const LassoTrace& pi);
bool dpw_accepts_letters(const Dpw& d, const std::vector<std::uint32_t>& stem,
                         const std::vector<std::uint32_t>& loop);

// Piterman-style compact-Safra-tree determinization (see determinize.cpp).
// state_cap 0 means the library default.
Dpw nbw_to_dpw(const Nbw& a, int state_cap = 0);

// DOT / JSON exports.
std::string nbw_to_dot(const Nbw& a);
std::string dpw_to_dot(const Dpw& d);
std::string nbw_to_json(const Nbw& a);
Nbw nbw_from_json(const std::string& text);
std::string dpw_to_json(const Dpw& d);
Dpw dpw_from_json(const std::string& text);

}  // namespace bqltl
