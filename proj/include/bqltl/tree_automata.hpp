// ============================================================================
// tree_automata.hpp — alternating parity automata on labeled full trees
// ============================================================================
//
// Transitions are in disjunctive normal form: delta[q][label] is a list of
// conjuncts; a conjunct assigns to every direction the (possibly empty) set of
// states sent into that subtree.  Empty list = false, a conjunct of empty sets
// = true.  Max-parity acceptance on every branch of the run.

#pragma once

#include <optional>
#include <vector>

#include "bqltl/games.hpp"
#include "bqltl/tree.hpp"
#include "bqltl/word_automata.hpp"

namespace bqltl {

using TConj = std::vector<std::vector<int>>;  // [direction] -> sorted states
using TDnf = std::vector<TConj>;

struct TreeAutomaton {
  VarSet dir_vars;
  VarSet label_vars;
  int num_states = 0;
  int initial = 0;
  std::vector<std::vector<TDnf>> delta;  // [state][label]
  std::vector<int> color;

  // every conjunct sends at most one state per direction
  bool is_nondeterministic() const;
};

// Acceptor of the output trees of winning round-by-round implementations:
// directions are the inputs 2^in_vars, labels the outputs 2^out_vars, and the
// arena advances on the combined letter.  The label of the root node is
// ignored; the label reached after reading in(0..k) is the output at step k.
TreeAutomaton build_synthesis_apt(const Dpw& d, const VarSet& in_vars,
                                  const VarSet& out_vars);

// Existentially guesses the `xi` part of each label with full lookahead over
// the current directions, and restricts directions to `keep_dirs`.  The input
// must be nondeterministic; the output is alternating in general.
TreeAutomaton change(const TreeAutomaton& a, const VarSet& xi, const VarSet& keep_dirs);

// Alternation removal; language-preserving.
TreeAutomaton ndet(const TreeAutomaton& a, int state_cap = 0);

struct TreeEmptiness {
  bool empty = true;
  std::optional<RegularTree> witness;
};

// Emptiness with a regular witness.  Alternating inputs are sent through
// ndet() first.
TreeEmptiness apt_emptiness(const TreeAutomaton& a, int state_cap = 0);

// Membership game; exact for alternating automata as well.
bool tree_member(const TreeAutomaton& a, const RegularTree& t);

}  // namespace bqltl
