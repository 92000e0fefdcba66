#include "bqltl/tree_automata.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace bqltl {

bool TreeAutomaton::is_nondeterministic() const {
  for (const auto& per_label : delta)
    for (const auto& dnf : per_label)
      for (const auto& conj : dnf)
        for (const auto& states : conj)
          if (states.size() > 1) return false;
  return true;
}

// --------------------------------------------------------------------------
// Synthesis automaton
// --------------------------------------------------------------------------

TreeAutomaton build_synthesis_apt(const Dpw& d, const VarSet& in_vars,
                                  const VarSet& out_vars) {
  if (vs_union(in_vars, out_vars) != d.alphabet_vars ||
      !vs_disjoint(in_vars, out_vars))
    throw std::invalid_argument("build_synthesis_apt: variables do not split the alphabet");
  std::size_t nx = letter_count(in_vars);
  std::size_t ny = letter_count(out_vars);

  auto full_letter = [&](std::uint32_t x, std::uint32_t y) {
    Letter l = letter_set(in_vars, x);
    for (const auto& v : letter_set(out_vars, y)) l.insert(v);
    return letter_index(d.alphabet_vars, l);
  };

  TreeAutomaton a;
  a.dir_vars = in_vars;
  a.label_vars = out_vars;
  a.num_states = 1 + int(d.num_states * nx);
  a.initial = 0;
  auto sid = [&](int q, std::uint32_t x) { return 1 + int(q * nx + x); };
  a.delta.assign(a.num_states, std::vector<TDnf>(ny));
  a.color.assign(a.num_states, 0);
  a.color[0] = d.color[d.initial];

  for (std::uint32_t y = 0; y < ny; ++y) {
    TConj g(nx);
    for (std::uint32_t x = 0; x < nx; ++x) g[x] = {sid(d.initial, x)};
    a.delta[0][y] = {g};
  }
  for (int q = 0; q < d.num_states; ++q)
    for (std::uint32_t x = 0; x < nx; ++x) {
      int s = sid(q, x);
      a.color[s] = d.color[q];
      for (std::uint32_t y = 0; y < ny; ++y) {
        int qn = d.delta[q][full_letter(x, y)];
        TConj g(nx);
        for (std::uint32_t xn = 0; xn < nx; ++xn) g[xn] = {sid(qn, xn)};
        a.delta[s][y] = {g};
      }
    }
  return a;
}

// --------------------------------------------------------------------------
// Guessing part of the label with lookahead over the dropped directions
// --------------------------------------------------------------------------

TreeAutomaton change(const TreeAutomaton& a, const VarSet& xi, const VarSet& keep_dirs) {
  if (!vs_subset(xi, a.label_vars))
    throw std::invalid_argument("change: guessed variables outside the labels");
  if (!vs_subset(keep_dirs, a.dir_vars))
    throw std::invalid_argument("change: kept directions outside the directions");
  if (!a.is_nondeterministic())
    throw std::invalid_argument("change: input must be nondeterministic");

  VarSet theta = vs_diff(a.dir_vars, keep_dirs);
  VarSet new_labels = vs_diff(a.label_vars, xi);
  std::size_t n_up = letter_count(keep_dirs);
  std::size_t n_th = letter_count(theta);
  std::size_t n_xi = letter_count(xi);
  std::size_t n_nl = letter_count(new_labels);

  auto old_dir = [&](std::uint32_t up, std::uint32_t th) {
    Letter l = letter_set(keep_dirs, up);
    for (const auto& v : letter_set(theta, th)) l.insert(v);
    return letter_index(a.dir_vars, l);
  };
  auto old_label = [&](std::uint32_t sigma, std::uint32_t x) {
    Letter l = letter_set(new_labels, sigma);
    for (const auto& v : letter_set(xi, x)) l.insert(v);
    return letter_index(a.label_vars, l);
  };

  TreeAutomaton out;
  out.dir_vars = keep_dirs;
  out.label_vars = new_labels;
  out.num_states = a.num_states;
  out.initial = a.initial;
  out.color = a.color;
  out.delta.assign(a.num_states, std::vector<TDnf>(n_nl));
  for (int q = 0; q < a.num_states; ++q)
    for (std::uint32_t sigma = 0; sigma < n_nl; ++sigma) {
      TDnf dnf;
      for (std::uint32_t x = 0; x < n_xi; ++x)
        for (const auto& f : a.delta[q][old_label(sigma, x)]) {
          TConj g(n_up);
          for (std::uint32_t up = 0; up < n_up; ++up) {
            std::set<int> states;
            for (std::uint32_t th = 0; th < n_th; ++th)
              for (int s : f[old_dir(up, th)]) states.insert(s);
            g[up].assign(states.begin(), states.end());
          }
          dnf.push_back(std::move(g));
        }
      out.delta[q][sigma] = std::move(dnf);
    }
  return out;
}

// --------------------------------------------------------------------------
// Alternation removal
// --------------------------------------------------------------------------

namespace {

struct Gamma {
  int set_id;               // index into subset list
  std::uint32_t sigma;
  int choice_id;            // index into choice list of (set, sigma)
  std::uint32_t dir;
  auto operator<=>(const Gamma&) const = default;
};

}  // namespace

TreeAutomaton ndet(const TreeAutomaton& a, int state_cap) {
  if (state_cap <= 0) state_cap = 50000;
  std::size_t nd = letter_count(a.dir_vars);
  std::size_t nl = letter_count(a.label_vars);

  // Phase 1: reachable state sets and their per-label choice vectors.
  std::vector<std::vector<int>> sets;  // sorted
  std::map<std::vector<int>, int> set_id;
  auto intern_set = [&](std::vector<int> s) {
    auto it = set_id.find(s);
    if (it != set_id.end()) return it->second;
    int id = int(sets.size());
    if (id >= state_cap)
      throw ResourceError("alternation removal",
                          "more than " + std::to_string(state_cap) + " state sets");
    set_id.emplace(s, id);
    sets.push_back(std::move(s));
    return id;
  };

  // choices[set][sigma] = list of choice vectors (conjunct index per member)
  // succ[set][sigma][choice][dir] = successor set id (-1 when empty)
  std::vector<std::vector<std::vector<std::vector<int>>>> choices;
  std::vector<std::vector<std::vector<std::vector<int>>>> succ;
  std::queue<int> work;
  int s0 = intern_set({a.initial});
  work.push(s0);
  while (!work.empty()) {
    int id = work.front();
    work.pop();
    if (int(choices.size()) <= id) {
      choices.resize(sets.size());
      succ.resize(sets.size());
    }
    if (!choices[id].empty()) continue;
    choices[id].resize(nl);
    succ[id].resize(nl);
    const auto members = sets[id];
    for (std::uint32_t sigma = 0; sigma < nl; ++sigma) {
      // cartesian product of conjunct indices
      std::vector<int> vec(members.size(), 0);
      bool any_empty = false;
      for (int q : members)
        if (a.delta[q][sigma].empty()) any_empty = true;
      if (any_empty) continue;
      std::size_t total = 1;
      for (int q : members) {
        total *= a.delta[q][sigma].size();
        if (total > 4096)
          throw ResourceError("alternation removal", "choice explosion");
      }
      for (;;) {
        choices[id][sigma].push_back(vec);
        std::vector<int> per_dir(nd, -1);
        for (std::uint32_t d = 0; d < nd; ++d) {
          std::set<int> nxt;
          for (std::size_t i = 0; i < members.size(); ++i)
            for (int s : a.delta[members[i]][sigma][vec[i]][d]) nxt.insert(s);
          if (!nxt.empty()) {
            int nid = intern_set(std::vector<int>(nxt.begin(), nxt.end()));
            per_dir[d] = nid;
            if (int(choices.size()) <= nid || choices[nid].empty()) work.push(nid);
          }
        }
        succ[id][sigma].push_back(std::move(per_dir));
        std::size_t i = 0;
        for (;;) {
          if (i == vec.size()) goto done_sigma;
          if (std::size_t(++vec[i]) < a.delta[members[i]][sigma].size()) break;
          vec[i] = 0;
          ++i;
        }
      }
    done_sigma:;
    }
  }
  choices.resize(sets.size());
  succ.resize(sets.size());

  // Phase 2: the branch alphabet and the trace-checking word automaton.
  std::vector<Gamma> gammas;
  std::map<Gamma, int> gamma_id;
  for (std::size_t s = 0; s < sets.size(); ++s)
    for (std::uint32_t sigma = 0; sigma < nl; ++sigma)
      for (std::size_t c = 0; c < choices[s][sigma].size(); ++c)
        for (std::uint32_t d = 0; d < nd; ++d) {
          Gamma g{int(s), sigma, int(c), d};
          gamma_id.emplace(g, int(gammas.size()));
          gammas.push_back(g);
        }
  if (gammas.empty()) {
    Gamma g{0, 0, 0, 0};
    gamma_id.emplace(g, 0);
    gammas.push_back(g);
  }
  if (int(gammas.size()) > state_cap)
    throw ResourceError("alternation removal", "branch alphabet explosion");

  Npw bad;
  bad.alphabet_vars = {};
  bad.num_letters = gammas.size();
  bad.num_states = a.num_states;
  bad.initial = a.initial;
  bad.color.resize(a.num_states);
  for (int q = 0; q < a.num_states; ++q) bad.color[q] = a.color[q] + 1;
  bad.delta.assign(a.num_states, std::vector<std::vector<int>>(gammas.size()));
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
    const Gamma& g = gammas[gi];
    const auto& members = sets[g.set_id];
    if (choices[g.set_id][g.sigma].empty()) continue;
    const auto& vec = choices[g.set_id][g.sigma][g.choice_id];
    for (std::size_t i = 0; i < members.size(); ++i) {
      int q = members[i];
      bad.delta[q][gi] = a.delta[q][g.sigma][vec[i]][g.dir];
    }
  }

  Dpw good = nbw_to_dpw(npw_to_nbw(bad), state_cap);
  for (auto& c : good.color) ++c;  // complement: all traces must satisfy parity

  // Phase 3: assemble the nondeterministic tree automaton.
  std::map<std::pair<int, int>, int> nid;  // (good state, set) -> id
  std::vector<std::pair<int, int>> nstates;
  auto intern_n = [&](int dstate, int set) {
    auto key = std::make_pair(dstate, set);
    auto it = nid.find(key);
    if (it != nid.end()) return it->second;
    int id = int(nstates.size());
    if (id >= state_cap)
      throw ResourceError("alternation removal", "result state explosion");
    nid.emplace(key, id);
    nstates.push_back(key);
    return id;
  };

  TreeAutomaton out;
  out.dir_vars = a.dir_vars;
  out.label_vars = a.label_vars;
  out.initial = intern_n(good.initial, s0);
  std::queue<int> nwork;
  nwork.push(out.initial);
  while (!nwork.empty()) {
    int id = nwork.front();
    nwork.pop();
    if (int(out.delta.size()) <= id) out.delta.resize(nstates.size());
    if (!out.delta[id].empty()) continue;
    out.delta[id].resize(nl);
    auto [dstate, set] = nstates[id];
    for (std::uint32_t sigma = 0; sigma < nl; ++sigma) {
      TDnf dnf;
      for (std::size_t c = 0; c < choices[set][sigma].size(); ++c) {
        TConj g(nd);
        for (std::uint32_t d = 0; d < nd; ++d) {
          int nset = succ[set][sigma][c][d];
          if (nset < 0) continue;
          int dn = good.delta[dstate][gamma_id.at(Gamma{set, sigma, int(c), d})];
          int tid = intern_n(dn, nset);
          g[d] = {tid};
          if (int(out.delta.size()) <= tid || out.delta[tid].empty()) nwork.push(tid);
        }
        dnf.push_back(std::move(g));
      }
      out.delta[id][sigma] = std::move(dnf);
    }
  }
  out.delta.resize(nstates.size());
  out.num_states = int(nstates.size());
  out.color.resize(out.num_states);
  for (int i = 0; i < out.num_states; ++i) out.color[i] = good.color[nstates[i].first];
  return out;
}

// --------------------------------------------------------------------------
// Emptiness and membership games
// --------------------------------------------------------------------------

namespace {

// shared sinks appended to every game
struct GameBuild {
  ParityGame g;
  int even_sink, odd_sink;
  GameBuild() {
    even_sink = 0;
    odd_sink = 1;
    g.pos.push_back({0, 0, {0}});
    g.pos.push_back({0, 1, {1}});
  }
};

}  // namespace

TreeEmptiness apt_emptiness(const TreeAutomaton& a, int state_cap) {
  if (!a.is_nondeterministic()) return apt_emptiness(ndet(a, state_cap), state_cap);
  std::size_t nd = letter_count(a.dir_vars);
  std::size_t nl = letter_count(a.label_vars);

  GameBuild gb;
  int base = int(gb.g.pos.size());
  // base position per state, then intermediate positions appended
  for (int q = 0; q < a.num_states; ++q)
    gb.g.pos.push_back({0, a.color[q], {}});
  std::map<int, std::pair<std::uint32_t, const TConj*>> inter_of;
  for (int q = 0; q < a.num_states; ++q) {
    for (std::uint32_t sigma = 0; sigma < nl; ++sigma)
      for (const auto& f : a.delta[q][sigma]) {
        std::vector<int> moves;
        for (std::uint32_t d = 0; d < nd; ++d)
          for (int s : f[d]) moves.push_back(base + s);
        if (moves.empty()) {
          gb.g.pos[base + q].succ.push_back(gb.even_sink);
          continue;
        }
        int ipos = int(gb.g.pos.size());
        gb.g.pos.push_back({1, a.color[q], std::move(moves)});
        inter_of[ipos] = {sigma, &f};
        gb.g.pos[base + q].succ.push_back(ipos);
      }
    if (gb.g.pos[base + q].succ.empty())
      gb.g.pos[base + q].succ.push_back(gb.odd_sink);
  }
  // choice labels for the witness: for each base state, which (sigma, conj)
  std::map<int, std::pair<std::uint32_t, const TConj*>> even_sink_choice;
  {
    for (int q = 0; q < a.num_states; ++q)
      for (std::uint32_t sigma = 0; sigma < nl; ++sigma)
        for (const auto& f : a.delta[q][sigma]) {
          bool empty = true;
          for (const auto& ss : f)
            if (!ss.empty()) empty = false;
          if (empty && !even_sink_choice.count(base + q))
            even_sink_choice[base + q] = {sigma, &f};
        }
  }

  auto sol = zielonka_solve(gb.g);
  TreeEmptiness res;
  if (sol.winner[base + a.initial] != 0) return res;
  res.empty = false;

  // Witness: memory states are the strategy-reachable base states.
  RegularTree t;
  t.dir_vars = a.dir_vars;
  t.label_vars = a.label_vars;
  std::map<int, int> mem;  // automaton state -> memory id
  std::vector<int> order;
  std::queue<int> bfs;
  mem[a.initial] = 0;
  order.push_back(a.initial);
  bfs.push(a.initial);
  std::vector<std::uint32_t> labels;
  std::vector<std::vector<int>> next_state;  // automaton-state successors
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    int choice = sol.strategy[base + q];
    std::uint32_t sigma = 0;
    const TConj* f = nullptr;
    if (choice == gb.even_sink) {
      auto it = even_sink_choice.find(base + q);
      if (it != even_sink_choice.end()) {
        sigma = it->second.first;
        f = it->second.second;
      }
    } else {
      auto it = inter_of.find(choice);
      if (it != inter_of.end()) {
        sigma = it->second.first;
        f = it->second.second;
      }
    }
    labels.push_back(sigma);
    std::vector<int> row(nd, q);
    if (f)
      for (std::uint32_t d = 0; d < nd; ++d)
        if (!(*f)[d].empty()) {
          int s = (*f)[d][0];
          if (!mem.count(s)) {
            mem[s] = int(mem.size());
            order.push_back(s);
            bfs.push(s);
          }
          row[d] = s;
        }
    next_state.push_back(std::move(row));
  }
  t.num_states = int(order.size());
  t.initial = 0;
  t.label = labels;
  t.next.assign(t.num_states, std::vector<int>(nd));
  for (int i = 0; i < t.num_states; ++i)
    for (std::uint32_t d = 0; d < nd; ++d) t.next[i][d] = mem.at(next_state[i][d]);
  res.witness = std::move(t);
  return res;
}

bool tree_member(const TreeAutomaton& a, const RegularTree& t) {
  if (a.dir_vars != t.dir_vars || a.label_vars != t.label_vars)
    throw std::invalid_argument("tree_member: alphabet mismatch");
  std::size_t nd = letter_count(a.dir_vars);

  GameBuild gb;
  std::map<std::pair<int, int>, int> ids;  // (state, memory) -> position
  std::map<int, std::pair<int, int>> node_of;
  std::queue<int> work;
  auto intern = [&](int q, int m) {
    auto key = std::make_pair(q, m);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = int(gb.g.pos.size());
    gb.g.pos.push_back({0, a.color[q], {}});
    ids.emplace(key, id);
    node_of[id] = key;
    work.push(id);
    return id;
  };
  int start = intern(a.initial, t.initial);
  while (!work.empty()) {
    int id = work.front();
    work.pop();
    auto [q, m] = node_of.at(id);
    std::uint32_t sigma = t.label[m];
    std::vector<int> base_succ;
    for (const auto& f : a.delta[q][sigma]) {
      std::vector<int> moves;
      for (std::uint32_t d = 0; d < nd; ++d)
        for (int s : f[d]) moves.push_back(intern(s, t.next[m][d]));
      if (moves.empty()) {
        base_succ.push_back(gb.even_sink);
        continue;
      }
      int ipos = int(gb.g.pos.size());
      gb.g.pos.push_back({1, a.color[q], std::move(moves)});
      base_succ.push_back(ipos);
    }
    if (base_succ.empty()) base_succ.push_back(gb.odd_sink);
    gb.g.pos[id].succ = std::move(base_succ);
  }
  auto sol = zielonka_solve(gb.g);
  return sol.winner[start] == 0;
}

}  // namespace bqltl
