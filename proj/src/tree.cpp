#include "bqltl/tree.hpp"

#include <stdexcept>

namespace bqltl {

RegularTree make_constant_tree(VarSet dir_vars, VarSet label_vars, std::uint32_t lab) {
  RegularTree t;
  t.dir_vars = std::move(dir_vars);
  t.label_vars = std::move(label_vars);
  t.num_states = 1;
  t.initial = 0;
  t.label = {lab};
  t.next = {std::vector<int>(letter_count(t.dir_vars), 0)};
  return t;
}

int tree_walk(const RegularTree& t, const std::vector<std::uint32_t>& path) {
  int m = t.initial;
  for (auto d : path) m = t.next[m][d];
  return m;
}

std::uint32_t tree_label_at(const RegularTree& t, const std::vector<std::uint32_t>& path) {
  return t.label[tree_walk(t, path)];
}

RegularTree tree_compose(const RegularTree& a, const RegularTree& b) {
  if (a.dir_vars != b.dir_vars)
    throw std::invalid_argument("tree_compose: direction alphabets differ");
  if (!vs_disjoint(a.label_vars, b.label_vars))
    throw std::invalid_argument("tree_compose: label variables overlap");
  RegularTree t;
  t.dir_vars = a.dir_vars;
  t.label_vars = vs_union(a.label_vars, b.label_vars);
  std::size_t nd = letter_count(t.dir_vars);
  t.num_states = a.num_states * b.num_states;
  t.initial = a.initial * b.num_states + b.initial;
  t.label.resize(t.num_states);
  t.next.assign(t.num_states, std::vector<int>(nd));
  for (int i = 0; i < a.num_states; ++i)
    for (int j = 0; j < b.num_states; ++j) {
      int s = i * b.num_states + j;
      Letter merged = letter_set(a.label_vars, a.label[i]);
      for (const auto& v : letter_set(b.label_vars, b.label[j])) merged.insert(v);
      t.label[s] = letter_index(t.label_vars, merged);
      for (std::size_t d = 0; d < nd; ++d)
        t.next[s][d] = a.next[i][d] * b.num_states + b.next[j][d];
    }
  return t;
}

RegularTree hide(const RegularTree& t, const VarSet& drop) {
  RegularTree out = t;
  out.label_vars = vs_diff(t.label_vars, drop);
  for (int s = 0; s < t.num_states; ++s) {
    Letter l = letter_set(t.label_vars, t.label[s]);
    Letter kept;
    for (const auto& v : l)
      if (!vs_contains(drop, v)) kept.insert(v);
    out.label[s] = letter_index(out.label_vars, kept);
  }
  return out;
}

RegularTree widen_dirs(const RegularTree& t, const VarSet& new_dir_vars) {
  if (!vs_subset(t.dir_vars, new_dir_vars))
    throw std::invalid_argument("widen_dirs: old directions not contained in new");
  RegularTree out;
  out.dir_vars = new_dir_vars;
  out.label_vars = t.label_vars;
  out.num_states = t.num_states;
  out.initial = t.initial;
  out.label = t.label;
  std::size_t nd = letter_count(new_dir_vars);
  out.next.assign(t.num_states, std::vector<int>(nd));
  for (int s = 0; s < t.num_states; ++s)
    for (std::uint32_t d = 0; d < nd; ++d) {
      Letter full = letter_set(new_dir_vars, d);
      Letter proj;
      for (const auto& v : full)
        if (vs_contains(t.dir_vars, v)) proj.insert(v);
      out.next[s][d] = t.next[s][letter_index(t.dir_vars, proj)];
    }
  return out;
}

bool tree_equal_to_depth(const RegularTree& a, const RegularTree& b, int depth) {
  if (a.dir_vars != b.dir_vars || a.label_vars != b.label_vars) return false;
  std::size_t nd = letter_count(a.dir_vars);
  std::vector<std::pair<int, int>> layer{{a.initial, b.initial}};
  for (int k = 0; k <= depth; ++k) {
    std::vector<std::pair<int, int>> nxt;
    for (auto [i, j] : layer) {
      if (a.label[i] != b.label[j]) return false;
      if (k < depth)
        for (std::size_t d = 0; d < nd; ++d)
          nxt.emplace_back(a.next[i][d], b.next[j][d]);
    }
    layer = std::move(nxt);
  }
  return true;
}

std::vector<RegularTree> enumerate_trees(const VarSet& dir_vars,
                                         const VarSet& label_vars, int max_memory,
                                         std::size_t cap) {
  std::vector<RegularTree> out;
  std::size_t nd = letter_count(dir_vars);
  std::size_t nl = letter_count(label_vars);
  for (int m = 1; m <= max_memory; ++m) {
    // label assignment: nl^m, transition table: m^(m*nd)
    std::vector<std::uint32_t> label(m, 0);
    for (;;) {
      std::vector<std::vector<int>> next(m, std::vector<int>(nd, 0));
      for (;;) {
        RegularTree t;
        t.dir_vars = dir_vars;
        t.label_vars = label_vars;
        t.num_states = m;
        t.initial = 0;
        t.label = label;
        t.next = next;
        out.push_back(std::move(t));
        if (out.size() >= cap) return out;
        // increment transition table
        int i = 0, j = 0;
        for (;;) {
          if (i == m) goto next_label;
          if (++next[i][j] < m) break;
          next[i][j] = 0;
          if (++j == int(nd)) {
            j = 0;
            ++i;
          }
        }
      }
    next_label:
      int i = 0;
      for (;;) {
        if (i == m) goto next_memory;
        if (++label[i] < nl) break;
        label[i] = 0;
        ++i;
      }
    }
  next_memory:;
  }
  return out;
}

}  // namespace bqltl
