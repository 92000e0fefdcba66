// Determinization of Buchi word automata into parity automata via compact
// history trees.  Each tree node carries a name and a macrostate; branching
// tracks visits to accepting states, merges record progress events that
// become parity colors.

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <vector>

#include "bqltl/word_automata.hpp"

namespace bqltl {

namespace {

struct TNode {
  int name = 0;
  std::vector<int> states;           // sorted macrostate
  std::vector<TNode> children;       // ascending name order
};

void serialize(const TNode& n, std::string& out) {
  out += '(';
  out += std::to_string(n.name);
  out += ':';
  for (int q : n.states) {
    out += std::to_string(q);
    out += ',';
  }
  for (const auto& c : n.children) serialize(c, out);
  out += ')';
}

std::string tree_key(const TNode& root, int color) {
  std::string s = std::to_string(color) + "|";
  serialize(root, s);
  return s;
}

void collect(TNode& n, std::vector<TNode*>& out) {
  out.push_back(&n);
  for (auto& c : n.children) collect(c, out);
}

void step_powerset(TNode& n, const Nbw& a, std::uint32_t l) {
  std::set<int> next;
  for (int q : n.states)
    for (int s : a.succs(q, l)) next.insert(s);
  n.states.assign(next.begin(), next.end());
  for (auto& c : n.children) step_powerset(c, a, l);
}

void remove_states(TNode& n, const std::vector<int>& drop) {
  std::vector<int> kept;
  std::set_difference(n.states.begin(), n.states.end(), drop.begin(), drop.end(),
                      std::back_inserter(kept));
  n.states = std::move(kept);
  for (auto& c : n.children) remove_states(c, drop);
}

void step_horizontal(TNode& n) {
  std::vector<int> seen;
  for (auto& c : n.children) {
    std::vector<int> before = c.states;
    remove_states(c, seen);
    std::vector<int> merged;
    std::set_union(seen.begin(), seen.end(), before.begin(), before.end(),
                   std::back_inserter(merged));
    seen = std::move(merged);
  }
  for (auto& c : n.children) step_horizontal(c);
}

void step_remove_empty(TNode& n, int& e) {
  std::vector<TNode> kept;
  for (auto& c : n.children) {
    if (c.states.empty()) {
      std::vector<TNode*> sub;
      collect(c, sub);
      for (auto* p : sub) e = std::min(e, p->name);
    } else {
      step_remove_empty(c, e);
      kept.push_back(std::move(c));
    }
  }
  n.children = std::move(kept);
}

void step_green(TNode& n, int& f) {
  std::vector<int> uni;
  for (const auto& c : n.children) {
    std::vector<int> merged;
    std::set_union(uni.begin(), uni.end(), c.states.begin(), c.states.end(),
                   std::back_inserter(merged));
    uni = std::move(merged);
  }
  if (!n.children.empty() && uni == n.states) {
    f = std::min(f, n.name);
    n.children.clear();
    return;
  }
  for (auto& c : n.children) step_green(c, f);
}

void rename_nodes(TNode& root) {
  std::vector<TNode*> all;
  collect(root, all);
  std::sort(all.begin(), all.end(),
            [](const TNode* x, const TNode* y) { return x->name < y->name; });
  int next = 1;
  for (auto* p : all) p->name = next++;
}

}  // namespace

Dpw nbw_to_dpw(const Nbw& input, int state_cap) {
  Nbw a = prune(input);
  if (state_cap <= 0) state_cap = 100000;
  int n = std::max(a.num_states, 1);
  const int neutral = 4 * n + 1;  // min-parity, odd: no progress event

  TNode init_tree;
  init_tree.name = 1;
  init_tree.states = {a.initial};

  struct St {
    TNode tree;
    int color;
    bool dead = false;
  };
  std::vector<St> states;
  std::map<std::string, int> ids;
  auto intern = [&](TNode t, int color, bool dead) {
    std::string key = dead ? "DEAD" : tree_key(t, color);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = int(states.size());
    if (id >= state_cap)
      throw ResourceError("determinization",
                          std::to_string(id) + " parity states (cap " +
                              std::to_string(state_cap) + ")");
    ids.emplace(std::move(key), id);
    states.push_back(St{std::move(t), color, dead});
    return id;
  };

  int start = intern(init_tree, neutral, false);
  std::vector<std::vector<int>> delta;
  std::queue<int> work;
  work.push(start);
  while (!work.empty()) {
    int id = work.front();
    work.pop();
    if (int(delta.size()) <= id) delta.resize(states.size());
    if (!delta[id].empty()) continue;
    delta[id].assign(a.num_letters, -1);
    for (std::uint32_t l = 0; l < a.num_letters; ++l) {
      int tgt;
      if (states[id].dead) {
        tgt = id;
      } else {
        TNode t = states[id].tree;
        step_powerset(t, a, l);
        // branch on accepting states, fresh names by ascending parent name
        {
          std::vector<std::pair<int, bool>> info;  // (name, has accepting)
          auto scan = [&](auto&& self, const TNode& nd) -> void {
            bool has = std::any_of(nd.states.begin(), nd.states.end(),
                                   [&](int q) { return a.accepting[q]; });
            info.emplace_back(nd.name, has);
            for (const auto& c : nd.children) self(self, c);
          };
          scan(scan, t);
          std::sort(info.begin(), info.end());
          int fresh = info.empty() ? 1 : info.back().first + 1;
          std::map<int, int> child_name;
          for (auto& [name, has] : info)
            if (has) child_name[name] = fresh++;
          auto grow = [&](auto&& self, TNode& nd) -> void {
            for (std::size_t i = 0, e = nd.children.size(); i < e; ++i)
              self(self, nd.children[i]);
            auto it = child_name.find(nd.name);
            if (it == child_name.end()) return;
            TNode child;
            child.name = it->second;
            for (int q : nd.states)
              if (a.accepting[q]) child.states.push_back(q);
            nd.children.push_back(std::move(child));
          };
          grow(grow, t);
        }
        step_horizontal(t);
        int e = neutral, f = neutral;
        step_remove_empty(t, e);
        step_green(t, f);
        if (t.states.empty()) {
          TNode dead_tree;
          tgt = intern(std::move(dead_tree), 1, true);
        } else {
          int color;
          if (e == neutral && f == neutral) color = neutral;
          else if (e < f) color = 2 * e - 1;
          else color = 2 * f;
          rename_nodes(t);
          tgt = intern(std::move(t), color, false);
        }
      }
      if (int(delta.size()) < int(states.size())) delta.resize(states.size());
      if (delta[tgt].empty()) work.push(tgt);
      delta[id][l] = tgt;
    }
  }
  delta.resize(states.size());

  Dpw d;
  d.alphabet_vars = a.alphabet_vars;
  d.num_letters = a.num_letters;
  d.num_states = int(states.size());
  d.initial = start;
  d.delta.resize(d.num_states);
  d.color.resize(d.num_states);
  for (int i = 0; i < d.num_states; ++i) {
    d.delta[i] = delta[i].empty() ? std::vector<int>(a.num_letters, i) : delta[i];
    // internal colors are min-parity; flip to the max-parity convention
    d.color[i] = (4 * n + 2) - states[i].color;
  }
  return d;
}

}  // namespace bqltl
