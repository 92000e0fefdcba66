// ============================================================================
// tree.hpp — finitely represented labeled trees
// ============================================================================
//
// A regular tree assigns a label in 2^label_vars to every finite sequence of
// directions in 2^dir_vars.  Labels are produced by a finite-memory walk, so
// the label of a node depends only on the memory state reached along its path.

#pragma once

#include <cstdint>
#include <vector>

#include "bqltl/trace.hpp"
#include "bqltl/word_automata.hpp"

namespace bqltl {

struct RegularTree {
  VarSet dir_vars;
  VarSet label_vars;
  int num_states = 1;
  int initial = 0;
  std::vector<std::uint32_t> label;        // per state, bits over label_vars
  std::vector<std::vector<int>> next;      // [state][direction] -> state
};

RegularTree make_constant_tree(VarSet dir_vars, VarSet label_vars, std::uint32_t label);

// Memory state after walking a direction sequence from the root.
int tree_walk(const RegularTree& t, const std::vector<std::uint32_t>& path);

// Label of the node at `path` (the root label is label[initial]).
std::uint32_t tree_label_at(const RegularTree& t, const std::vector<std::uint32_t>& path);

// Pairs two trees over the same directions with disjoint label variables.
RegularTree tree_compose(const RegularTree& a, const RegularTree& b);

// Drops some label variables.
RegularTree hide(const RegularTree& t, const VarSet& drop);

// Re-reads a tree over a larger direction alphabet: the label of a node
// depends only on the projection of its path to the old directions.
RegularTree widen_dirs(const RegularTree& t, const VarSet& new_dir_vars);

bool tree_equal_to_depth(const RegularTree& a, const RegularTree& b, int depth);

// All trees over the given alphabets with at most max_memory states, labels
// and transitions enumerated exhaustively.  Sizes explode quickly; callers
// keep the alphabets tiny.
std::vector<RegularTree> enumerate_trees(const VarSet& dir_vars,
                                         const VarSet& label_vars, int max_memory,
                                         std::size_t cap);

}  // namespace bqltl
