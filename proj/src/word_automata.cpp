#include "bqltl/word_automata.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bqltl {

std::size_t letter_count(const VarSet& vars) {
  if (vars.size() > kMaxAlphabetVars)
    throw ResourceError("alphabet",
                        "explicit alphabet over " + std::to_string(vars.size()) +
                            " variables (cap " + std::to_string(kMaxAlphabetVars) + ")");
  return std::size_t(1) << vars.size();
}

std::uint32_t letter_index(const VarSet& vars, const Letter& l) {
  std::uint32_t idx = 0;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (l.count(vars[i])) idx |= std::uint32_t(1) << i;
  return idx;
}

Letter letter_set(const VarSet& vars, std::uint32_t index) {
  Letter l;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (index & (std::uint32_t(1) << i)) l.insert(vars[i]);
  return l;
}

Nbw make_nbw(VarSet alphabet_vars, int num_states, int initial) {
  Nbw a;
  a.alphabet_vars = std::move(alphabet_vars);
  a.num_letters = letter_count(a.alphabet_vars);
  a.num_states = num_states;
  a.initial = initial;
  a.delta.assign(num_states, std::vector<std::vector<int>>(a.num_letters));
  a.accepting.assign(num_states, false);
  return a;
}

// --------------------------------------------------------------------------
// LTL -> NBW: closure tableau with on-the-fly cover expansion, generalized
// Buchi acceptance per Until, degeneralized with a counter track.
// --------------------------------------------------------------------------

namespace {

struct TableauBuilder {
  std::vector<MatrixPtr> closure;
  const VarSet& vars;

  explicit TableauBuilder(const VarSet& v) : vars(v) {}

  int index_of(const MatrixPtr& m) {
    for (std::size_t i = 0; i < closure.size(); ++i)
      if (matrix_equal(closure[i], m)) return int(i);
    closure.push_back(m);
    return int(closure.size()) - 1;
  }

  using Atom = std::set<int>;

  struct Frame {
    Atom in;
    std::vector<int> todo;
  };

  std::vector<Atom> covers(const Atom& obligations) {
    std::vector<Atom> out;
    std::set<Atom> seen;
    std::vector<Frame> stack{{Atom{}, {obligations.begin(), obligations.end()}}};
    while (!stack.empty()) {
      Frame fr = std::move(stack.back());
      stack.pop_back();
      if (fr.todo.empty()) {
        if (seen.insert(fr.in).second) out.push_back(std::move(fr.in));
        continue;
      }
      int fi = fr.todo.back();
      fr.todo.pop_back();
      if (fr.in.count(fi)) {
        stack.push_back(std::move(fr));
        continue;
      }
      MatrixPtr f = closure[fi];  // copy: index_of may reallocate closure
      switch (f->op) {
        case MOp::False:
          break;
        case MOp::True:
        case MOp::Atom:
        case MOp::Next: {
          if (f->op == MOp::Atom) {
            int neg = find_existing(mk_not(f));
            if (neg >= 0 && fr.in.count(neg)) break;
          }
          fr.in.insert(fi);
          stack.push_back(std::move(fr));
          break;
        }
        case MOp::Not: {
          int pos = index_of(f->lhs);
          if (fr.in.count(pos)) break;
          fr.in.insert(fi);
          stack.push_back(std::move(fr));
          break;
        }
        case MOp::And: {
          fr.in.insert(fi);
          fr.todo.push_back(index_of(f->lhs));
          fr.todo.push_back(index_of(f->rhs));
          stack.push_back(std::move(fr));
          break;
        }
        case MOp::Or: {
          Frame r = fr;
          fr.in.insert(fi);
          fr.todo.push_back(index_of(f->lhs));
          r.in.insert(fi);
          r.todo.push_back(index_of(f->rhs));
          stack.push_back(std::move(fr));
          stack.push_back(std::move(r));
          break;
        }
        case MOp::Until: {
          Frame later = fr;
          fr.in.insert(fi);
          fr.todo.push_back(index_of(f->rhs));  // satisfied now
          later.in.insert(fi);
          later.todo.push_back(index_of(f->lhs));  // delayed
          stack.push_back(std::move(fr));
          stack.push_back(std::move(later));
          break;
        }
        case MOp::Release: {
          Frame later = fr;
          fr.in.insert(fi);
          fr.todo.push_back(index_of(f->rhs));
          fr.todo.push_back(index_of(f->lhs));  // released now
          later.in.insert(fi);
          later.todo.push_back(index_of(f->rhs));  // keep holding
          stack.push_back(std::move(fr));
          stack.push_back(std::move(later));
          break;
        }
        default:
          throw std::logic_error("tableau: non-NNF operator");
      }
    }
    return out;
  }

  int find_existing(const MatrixPtr& m) const {
    for (std::size_t i = 0; i < closure.size(); ++i)
      if (matrix_equal(closure[i], m)) return int(i);
    return -1;
  }

  // Next-time obligations of an atom: X-children plus delayed U/R.
  Atom next_obligations(const Atom& a) {
    Atom out;
    for (int fi : a) {
      MatrixPtr f = closure[fi];
      if (f->op == MOp::Next) out.insert(index_of(f->lhs));
      if (f->op == MOp::Until) {
        int rhs = index_of(f->rhs);
        if (!a.count(rhs)) out.insert(fi);
      }
      if (f->op == MOp::Release) {
        int lhs = index_of(f->lhs);
        if (!a.count(lhs)) out.insert(fi);
      }
    }
    return out;
  }

  bool compatible(const Atom& a, std::uint32_t letter) const {
    for (int fi : a) {
      const MatrixPtr& f = closure[fi];
      if (f->op == MOp::Atom) {
        std::size_t bit = var_bit(f->var);
        if (!(letter & (std::uint32_t(1) << bit))) return false;
      } else if (f->op == MOp::Not) {
        std::size_t bit = var_bit(f->lhs->var);
        if (letter & (std::uint32_t(1) << bit)) return false;
      }
    }
    return true;
  }

  std::size_t var_bit(const std::string& v) const {
    auto it = std::lower_bound(vars.begin(), vars.end(), v);
    if (it == vars.end() || *it != v)
      throw std::invalid_argument("ltl_to_nbw: variable '" + v +
                                  "' outside the alphabet");
    return std::size_t(it - vars.begin());
  }
};

}  // namespace

Nbw ltl_to_nbw(const MatrixPtr& m, const VarSet& alphabet_vars) {
  MatrixPtr nnf = to_nnf(m);
  TableauBuilder tb(alphabet_vars);
  int root = tb.index_of(nnf);

  using Atom = TableauBuilder::Atom;
  std::map<Atom, int> atom_id;            // atom -> dense id
  std::vector<Atom> atoms;
  auto intern = [&](const Atom& a) {
    auto it = atom_id.find(a);
    if (it != atom_id.end()) return it->second;
    int id = int(atoms.size());
    atom_id[a] = id;
    atoms.push_back(a);
    return id;
  };

  std::vector<Atom> initial_atoms = tb.covers({root});
  std::queue<int> work;
  for (const auto& a : initial_atoms) {
    int id = intern(a);
    work.push(id);
  }
  // successor atoms of each atom (letter-independent; letters filter sources)
  std::vector<std::vector<int>> succ_atoms;
  std::set<int> expanded;
  while (!work.empty()) {
    int id = work.front();
    work.pop();
    if (!expanded.insert(id).second) continue;
    if (int(succ_atoms.size()) <= id) succ_atoms.resize(atoms.size());
    auto next = tb.next_obligations(atoms[id]);
    for (const auto& b : tb.covers(next)) {
      int bid = intern(b);
      if (int(succ_atoms.size()) <= id) succ_atoms.resize(atoms.size());
      succ_atoms[id].push_back(bid);
      if (!expanded.count(bid)) work.push(bid);
    }
  }
  succ_atoms.resize(atoms.size());

  // Untils in the closure drive the generalized acceptance.
  std::vector<int> untils;
  for (std::size_t i = 0; i < tb.closure.size(); ++i)
    if (tb.closure[i]->op == MOp::Until) untils.push_back(int(i));
  int k = int(untils.size());

  auto in_f = [&](int atom, int ui) {
    int u = untils[ui];
    const auto& a = atoms[atom];
    if (!a.count(u)) return true;
    int rhs = tb.find_existing(tb.closure[u]->rhs);
    return rhs >= 0 && a.count(rhs);
  };

  // States: init (0) plus (atom, counter) pairs, counter in 0..k.
  std::map<std::pair<int, int>, int> state_id;
  auto sid = [&](int atom, int cnt) {
    auto key = std::make_pair(atom, cnt);
    auto it = state_id.find(key);
    if (it != state_id.end()) return it->second;
    int id = int(state_id.size()) + 1;
    state_id[key] = id;
    return id;
  };
  auto advance = [&](int atom, int cnt) {
    if (k == 0) return 0;
    int c = (cnt == k) ? 0 : cnt;
    while (c < k && in_f(atom, c)) ++c;
    return c;
  };

  std::size_t nl = letter_count(alphabet_vars);
  std::vector<std::map<std::uint32_t, std::set<int>>> trans(1);
  std::queue<std::pair<int, int>> swork;

  auto push_target = [&](int from, std::uint32_t letter, int atom, int cnt) {
    int id = sid(atom, cnt);
    if (std::size_t(id) >= trans.size()) {
      trans.resize(id + 1);
      swork.push({atom, cnt});
    }
    trans[from][letter].insert(id);
  };

  // init: choose an initial atom compatible with the first letter, move on.
  for (std::uint32_t a = 0; a < nl; ++a) {
    for (const auto& ia : initial_atoms) {
      int aid = atom_id.at(ia);
      if (!tb.compatible(ia, a)) continue;
      for (int b : succ_atoms[aid]) push_target(0, a, b, advance(b, 0));
    }
  }
  while (!swork.empty()) {
    auto [atom, cnt] = swork.front();
    swork.pop();
    int from = sid(atom, cnt);
    for (std::uint32_t a = 0; a < nl; ++a) {
      if (!tb.compatible(atoms[atom], a)) continue;
      for (int b : succ_atoms[atom]) push_target(from, a, b, advance(b, cnt));
    }
  }

  int n = int(trans.size());
  Nbw out = make_nbw(alphabet_vars, n, 0);
  for (int q = 0; q < n; ++q)
    for (const auto& [a, ss] : trans[q])
      out.delta[q][a] = std::vector<int>(ss.begin(), ss.end());
  for (const auto& [key, id] : state_id)
    out.accepting[id] = (k == 0) || (key.second == k);
  if (k == 0)
    out.accepting[0] = true;
  return prune(out);
}

// --------------------------------------------------------------------------
// Boolean and projection operations
// --------------------------------------------------------------------------

Nbw product(const Nbw& a, const Nbw& b) {
  if (a.alphabet_vars != b.alphabet_vars || a.num_letters != b.num_letters)
    throw std::invalid_argument("product: alphabet mismatch");
  int na = a.num_states, nb = b.num_states;
  auto id = [&](int qa, int qb, int t) { return (qa * nb + qb) * 2 + t; };
  Nbw out = make_nbw(a.alphabet_vars, na * nb * 2, id(a.initial, b.initial, 0));
  out.num_letters = a.num_letters;
  if (out.num_letters != letter_count(out.alphabet_vars)) {
    out.delta.assign(out.num_states, std::vector<std::vector<int>>(out.num_letters));
  }
  for (int qa = 0; qa < na; ++qa)
    for (int qb = 0; qb < nb; ++qb)
      for (int t = 0; t < 2; ++t) {
        int from = id(qa, qb, t);
        // track 0 waits to sit on an accepting a-state, track 1 on b.
        int nt = t == 0 ? (a.accepting[qa] ? 1 : 0) : (b.accepting[qb] ? 0 : 1);
        for (std::uint32_t l = 0; l < out.num_letters; ++l)
          for (int sa : a.succs(qa, l))
            for (int sb : b.succs(qb, l))
              out.delta[from][l].push_back(id(sa, sb, nt));
        out.accepting[from] = (t == 1 && b.accepting[qb]);
      }
  for (auto& row : out.delta)
    for (auto& ss : row) {
      std::sort(ss.begin(), ss.end());
      ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
    }
  return prune(out);
}

Nbw project_exists(const Nbw& a, const VarSet& x) {
  if (!vs_subset(x, a.alphabet_vars))
    throw std::invalid_argument("project_exists: variables outside alphabet");
  VarSet keep = vs_diff(a.alphabet_vars, x);
  Nbw out = make_nbw(keep, a.num_states, a.initial);
  out.accepting = a.accepting;
  for (int q = 0; q < a.num_states; ++q)
    for (std::uint32_t l = 0; l < a.num_letters; ++l) {
      Letter old_letter = letter_set(a.alphabet_vars, l);
      std::uint32_t nl = letter_index(keep, old_letter);
      auto& tgt = out.delta[q][nl];
      tgt.insert(tgt.end(), a.succs(q, l).begin(), a.succs(q, l).end());
    }
  for (auto& row : out.delta)
    for (auto& ss : row) {
      std::sort(ss.begin(), ss.end());
      ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
    }
  return out;
}

// --------------------------------------------------------------------------
// Pruning: reachability, liveness, bisimulation quotient
// --------------------------------------------------------------------------

namespace {

std::vector<int> scc_of(const Nbw& a) {
  // Tarjan, iterative.
  int n = a.num_states;
  std::vector<int> comp(n, -1), low(n), num(n, -1), stk;
  std::vector<bool> on(n, false);
  int counter = 0, comps = 0;
  struct Frame { int v; std::size_t li = 0; std::size_t si = 0; };
  for (int root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    std::vector<Frame> call{{root}};
    num[root] = low[root] = counter++;
    stk.push_back(root);
    on[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      bool descended = false;
      while (f.li < a.num_letters) {
        const auto& ss = a.delta[f.v][f.li];
        if (f.si >= ss.size()) {
          ++f.li;
          f.si = 0;
          continue;
        }
        int w = ss[f.si++];
        if (num[w] == -1) {
          num[w] = low[w] = counter++;
          stk.push_back(w);
          on[w] = true;
          call.push_back({w});
          descended = true;
          break;
        }
        if (on[w]) low[f.v] = std::min(low[f.v], num[w]);
      }
      if (descended) continue;
      int v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == num[v]) {
        for (;;) {
          int w = stk.back();
          stk.pop_back();
          on[w] = false;
          comp[w] = comps;
          if (w == v) break;
        }
        ++comps;
      }
    }
  }
  return comp;
}

}  // namespace

Nbw prune(const Nbw& a) {
  int n = a.num_states;
  // reachable
  std::vector<bool> reach(n, false);
  std::queue<int> bfs;
  reach[a.initial] = true;
  bfs.push(a.initial);
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    for (std::uint32_t l = 0; l < a.num_letters; ++l)
      for (int s : a.succs(q, l))
        if (!reach[s]) {
          reach[s] = true;
          bfs.push(s);
        }
  }
  // live: can reach an accepting state inside a nontrivial SCC
  auto comp = scc_of(a);
  std::vector<bool> nontrivial(n, false);
  std::map<int, int> comp_size;
  for (int q = 0; q < n; ++q) ++comp_size[comp[q]];
  for (int q = 0; q < n; ++q) {
    bool self = false;
    for (std::uint32_t l = 0; l < a.num_letters && !self; ++l)
      for (int s : a.succs(q, l))
        if (s == q || (comp[s] == comp[q] && comp_size[comp[q]] > 1)) {
          self = true;
          break;
        }
    if (self) nontrivial[q] = true;
  }
  std::vector<bool> good(n, false);
  for (int q = 0; q < n; ++q) good[q] = a.accepting[q] && nontrivial[q];
  // backward closure of good
  std::vector<std::vector<int>> preds(n);
  for (int q = 0; q < n; ++q)
    for (std::uint32_t l = 0; l < a.num_letters; ++l)
      for (int s : a.succs(q, l)) preds[s].push_back(q);
  std::vector<bool> live(n, false);
  for (int q = 0; q < n; ++q)
    if (good[q]) {
      live[q] = true;
      bfs.push(q);
    }
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    for (int p : preds[q])
      if (!live[p]) {
        live[p] = true;
        bfs.push(p);
      }
  }

  std::vector<bool> keep(n);
  for (int q = 0; q < n; ++q) keep[q] = reach[q] && live[q];
  if (!keep[a.initial]) {
    Nbw empty;
    empty.alphabet_vars = a.alphabet_vars;
    empty.num_letters = a.num_letters;
    empty.num_states = 1;
    empty.initial = 0;
    empty.delta.assign(1, std::vector<std::vector<int>>(a.num_letters));
    empty.accepting.assign(1, false);
    return empty;
  }

  // bisimulation quotient over kept states (transitions into dropped states
  // are discarded: they cannot contribute accepting runs).
  std::vector<int> cls(n, -1);
  for (int q = 0; q < n; ++q)
    if (keep[q]) cls[q] = a.accepting[q] ? 1 : 0;
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::vector<int>, int> sig_id;
    std::vector<int> next_cls(n, -1);
    for (int q = 0; q < n; ++q) {
      if (!keep[q]) continue;
      std::vector<int> sig{cls[q]};
      for (std::uint32_t l = 0; l < a.num_letters; ++l) {
        std::set<int> cs;
        for (int s : a.succs(q, l))
          if (keep[s]) cs.insert(cls[s]);
        sig.push_back(-1);
        sig.insert(sig.end(), cs.begin(), cs.end());
      }
      auto [it, fresh] = sig_id.emplace(sig, int(sig_id.size()));
      next_cls[q] = it->second;
    }
    if (next_cls != cls) {
      changed = true;
      cls = next_cls;
    }
  }
  std::map<int, int> dense;
  for (int q = 0; q < n; ++q)
    if (keep[q]) dense.emplace(cls[q], int(dense.size()));
  Nbw out;
  out.alphabet_vars = a.alphabet_vars;
  out.num_letters = a.num_letters;
  out.num_states = int(dense.size());
  out.initial = dense.at(cls[a.initial]);
  out.delta.assign(out.num_states, std::vector<std::vector<int>>(a.num_letters));
  out.accepting.assign(out.num_states, false);
  for (int q = 0; q < n; ++q) {
    if (!keep[q]) continue;
    int dq = dense.at(cls[q]);
    out.accepting[dq] = a.accepting[q];
    for (std::uint32_t l = 0; l < a.num_letters; ++l)
      for (int s : a.succs(q, l))
        if (keep[s]) out.delta[dq][l].push_back(dense.at(cls[s]));
  }
  for (auto& row : out.delta)
    for (auto& ss : row) {
      std::sort(ss.begin(), ss.end());
      ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
    }
  return out;
}

// --------------------------------------------------------------------------
// Parity-to-Buchi, complement
// --------------------------------------------------------------------------

Npw dpw_to_npw(const Dpw& d) {
  Npw p;
  p.alphabet_vars = d.alphabet_vars;
  p.num_letters = d.num_letters;
  p.num_states = d.num_states;
  p.initial = d.initial;
  p.color = d.color;
  p.delta.assign(d.num_states, std::vector<std::vector<int>>(d.num_letters));
  for (int q = 0; q < d.num_states; ++q)
    for (std::uint32_t l = 0; l < d.num_letters; ++l)
      p.delta[q][l] = {d.delta[q][l]};
  return p;
}

Nbw npw_to_nbw(const Npw& p) {
  int maxc = 0;
  for (int c : p.color) maxc = std::max(maxc, c);
  std::vector<int> evens;
  for (int c = 0; c <= maxc; c += 2) evens.push_back(c);
  int ne = int(evens.size());
  int n = p.num_states;
  // state layout: base copy [0,n), then copy i for even color evens[i].
  Nbw out;
  out.alphabet_vars = p.alphabet_vars;
  out.num_letters = p.num_letters;
  out.num_states = n * (1 + ne);
  out.initial = p.initial;
  out.delta.assign(out.num_states, std::vector<std::vector<int>>(p.num_letters));
  out.accepting.assign(out.num_states, false);
  auto copy_id = [&](int q, int i) { return n * (1 + i) + q; };
  for (int q = 0; q < n; ++q)
    for (std::uint32_t l = 0; l < p.num_letters; ++l)
      for (int s : p.delta[q][l]) {
        out.delta[q][l].push_back(s);  // stay in base
        for (int i = 0; i < ne; ++i)
          if (p.color[s] <= evens[i]) out.delta[q][l].push_back(copy_id(s, i));
      }
  for (int i = 0; i < ne; ++i)
    for (int q = 0; q < n; ++q) {
      if (p.color[q] > evens[i]) continue;  // unreachable inside the copy
      for (std::uint32_t l = 0; l < p.num_letters; ++l)
        for (int s : p.delta[q][l])
          if (p.color[s] <= evens[i])
            out.delta[copy_id(q, i)][l].push_back(copy_id(s, i));
      out.accepting[copy_id(q, i)] = (p.color[q] == evens[i]);
    }
  return prune(out);
}

Nbw complement(const Nbw& a, int state_cap) {
  Dpw d = nbw_to_dpw(prune(a), state_cap);
  for (auto& c : d.color) ++c;  // parity flip = language complement
  return npw_to_nbw(dpw_to_npw(d));
}

// --------------------------------------------------------------------------
// Emptiness and membership
// --------------------------------------------------------------------------

EmptinessResult emptiness(const Nbw& a) {
  EmptinessResult res;
  int n = a.num_states;
  // forward BFS storing a parent edge for path reconstruction
  std::vector<int> par(n, -1), par_letter(n, -1);
  std::vector<bool> reach(n, false);
  std::queue<int> bfs;
  reach[a.initial] = true;
  bfs.push(a.initial);
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    for (std::uint32_t l = 0; l < a.num_letters; ++l)
      for (int s : a.succs(q, l))
        if (!reach[s]) {
          reach[s] = true;
          par[s] = q;
          par_letter[s] = int(l);
          bfs.push(s);
        }
  }
  for (int acc = 0; acc < n; ++acc) {
    if (!a.accepting[acc] || !reach[acc]) continue;
    // cycle acc -> acc
    std::vector<int> cpar(n, -1), cletter(n, -1);
    std::vector<bool> seen(n, false);
    std::queue<int> q2;
    bool found = false;
    int cycle_end = -1;
    for (std::uint32_t l = 0; l < a.num_letters && !found; ++l)
      for (int s : a.succs(acc, l)) {
        if (s == acc) {
          res.empty = false;
          // self loop
          std::vector<std::uint32_t> stem;
          for (int v = acc; par[v] != -1; v = par[v]) stem.push_back(par_letter[v]);
          std::reverse(stem.begin(), stem.end());
          res.stem_letters = stem;
          res.loop_letters = {l};
          goto done;
        }
        if (!seen[s]) {
          seen[s] = true;
          cpar[s] = acc;
          cletter[s] = int(l);
          q2.push(s);
        }
      }
    while (!q2.empty() && !found) {
      int v = q2.front();
      q2.pop();
      for (std::uint32_t l = 0; l < a.num_letters && !found; ++l)
        for (int s : a.succs(v, l)) {
          if (s == acc) {
            found = true;
            cycle_end = v;
            res.loop_letters = {l};
            break;
          }
          if (!seen[s]) {
            seen[s] = true;
            cpar[s] = v;
            cletter[s] = int(l);
            q2.push(s);
          }
        }
    }
    if (found) {
      res.empty = false;
      std::vector<std::uint32_t> back;
      for (int v = cycle_end; v != acc; v = cpar[v]) back.push_back(cletter[v]);
      std::reverse(back.begin(), back.end());
      back.insert(back.end(), res.loop_letters.begin(), res.loop_letters.end());
      res.loop_letters = back;
      std::vector<std::uint32_t> stem;
      for (int v = acc; par[v] != -1; v = par[v]) stem.push_back(par_letter[v]);
      std::reverse(stem.begin(), stem.end());
      res.stem_letters = stem;
      goto done;
    }
  }
done:
  if (!res.empty && letter_count(a.alphabet_vars) == a.num_letters) {
    std::vector<Letter> stem, loop;
    for (auto l : res.stem_letters) stem.push_back(letter_set(a.alphabet_vars, l));
    for (auto l : res.loop_letters) loop.push_back(letter_set(a.alphabet_vars, l));
    if (loop.empty()) loop.push_back({});
    res.witness = make_lasso(a.alphabet_vars, std::move(stem), std::move(loop));
  }
  return res;
}

bool nbw_accepts_lasso(const Nbw& a, const LassoTrace& pi) {
  if (a.alphabet_vars != pi.universe)
    throw std::invalid_argument("nbw_accepts_lasso: universe mismatch");
  std::size_t positions = pi.num_positions();
  auto succ_pos = [&](std::size_t p) {
    return p + 1 < positions ? p + 1 : pi.period_start();
  };
  auto node = [&](int q, std::size_t p) { return q * positions + p; };
  int total = a.num_states * int(positions);
  std::vector<bool> reach(total, false);
  std::queue<int> bfs;
  reach[node(a.initial, 0)] = true;
  bfs.push(node(a.initial, 0));
  std::vector<std::uint32_t> letters(positions);
  for (std::size_t p = 0; p < positions; ++p)
    letters[p] = letter_index(a.alphabet_vars, letter(pi, p));
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    int q = v / int(positions);
    std::size_t p = v % positions;
    for (int s : a.succs(q, letters[p])) {
      int w = node(s, succ_pos(p));
      if (!reach[w]) {
        reach[w] = true;
        bfs.push(w);
      }
    }
  }
  // accepting cycle: from each reachable accepting node in the loop region,
  // search for a cycle back to itself.
  for (int q = 0; q < a.num_states; ++q) {
    if (!a.accepting[q]) continue;
    for (std::size_t p = pi.period_start(); p < positions; ++p) {
      int start = node(q, p);
      if (!reach[start]) continue;
      std::vector<bool> seen(total, false);
      std::queue<int> b2;
      b2.push(start);
      bool first = true;
      while (!b2.empty()) {
        int v = b2.front();
        b2.pop();
        int vq = v / int(positions);
        std::size_t vp = v % positions;
        for (int s : a.succs(vq, letters[vp])) {
          int w = node(s, succ_pos(vp));
          if (w == start) return true;
          if (!seen[w]) {
            seen[w] = true;
            b2.push(w);
          }
        }
        first = false;
      }
      (void)first;
    }
  }
  return false;
}

bool dpw_accepts_letters(const Dpw& d, const std::vector<std::uint32_t>& stem,
                         const std::vector<std::uint32_t>& loop) {
  int q = d.initial;
  for (auto l : stem) q = d.delta[q][l];
  std::map<int, int> seen_at;  // state at loop boundary -> iteration
  std::vector<int> states_at_boundary;
  std::vector<std::vector<int>> colors_per_iter;
  for (int iter = 0;; ++iter) {
    auto it = seen_at.find(q);
    if (it != seen_at.end()) {
      std::vector<int> cyc;
      for (int k = it->second; k < iter; ++k)
        cyc.insert(cyc.end(), colors_per_iter[k].begin(), colors_per_iter[k].end());
      int maxc = *std::max_element(cyc.begin(), cyc.end());
      return maxc % 2 == 0;
    }
    seen_at[q] = iter;
    std::vector<int> colors;
    for (auto l : loop) {
      q = d.delta[q][l];
      colors.push_back(d.color[q]);
    }
    colors_per_iter.push_back(std::move(colors));
  }
}

bool dpw_accepts_lasso(const Dpw& d, const LassoTrace& pi) {
  if (d.alphabet_vars != pi.universe)
    throw std::invalid_argument("dpw_accepts_lasso: universe mismatch");
  std::vector<std::uint32_t> stem, loop;
  for (std::size_t p = 0; p < pi.stem.size(); ++p)
    stem.push_back(letter_index(d.alphabet_vars, pi.stem[p]));
  for (std::size_t p = 0; p < pi.loop.size(); ++p)
    loop.push_back(letter_index(d.alphabet_vars, pi.loop[p]));
  return dpw_accepts_letters(d, stem, loop);
}

// --------------------------------------------------------------------------
// Export
// --------------------------------------------------------------------------

static std::string letter_label(const VarSet& vars, std::uint32_t l,
                                std::size_t num_letters) {
  if (letter_count(vars) != num_letters) return std::to_string(l);
  Letter s = letter_set(vars, l);
  std::string out = "{";
  bool first = true;
  for (const auto& v : s) {
    if (!first) out += ",";
    out += v;
    first = false;
  }
  return out + "}";
}

std::string nbw_to_dot(const Nbw& a) {
  std::ostringstream os;
  os << "digraph nbw {\n  rankdir=LR;\n  init [shape=point];\n";
  for (int q = 0; q < a.num_states; ++q)
    os << "  q" << q << " [shape=" << (a.accepting[q] ? "doublecircle" : "circle")
       << "];\n";
  os << "  init -> q" << a.initial << ";\n";
  for (int q = 0; q < a.num_states; ++q)
    for (std::uint32_t l = 0; l < a.num_letters; ++l)
      for (int s : a.succs(q, l))
        os << "  q" << q << " -> q" << s << " [label=\""
           << letter_label(a.alphabet_vars, l, a.num_letters) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string dpw_to_dot(const Dpw& d) {
  std::ostringstream os;
  os << "digraph dpw {\n  rankdir=LR;\n  init [shape=point];\n";
  for (int q = 0; q < d.num_states; ++q)
    os << "  q" << q << " [shape=circle,label=\"q" << q << ":" << d.color[q]
       << "\"];\n";
  os << "  init -> q" << d.initial << ";\n";
  for (int q = 0; q < d.num_states; ++q)
    for (std::uint32_t l = 0; l < d.num_letters; ++l)
      os << "  q" << q << " -> q" << d.delta[q][l] << " [label=\""
         << letter_label(d.alphabet_vars, l, d.num_letters) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string nbw_to_json(const Nbw& a) {
  nlohmann::json j;
  j["alphabetVars"] = a.alphabet_vars;
  j["numLetters"] = a.num_letters;
  j["numStates"] = a.num_states;
  j["initial"] = a.initial;
  j["delta"] = a.delta;
  j["accepting"] = a.accepting;
  return j.dump();
}

Nbw nbw_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Nbw a;
  a.alphabet_vars = j.at("alphabetVars").get<VarSet>();
  a.num_letters = j.at("numLetters").get<std::size_t>();
  a.num_states = j.at("numStates").get<int>();
  a.initial = j.at("initial").get<int>();
  a.delta = j.at("delta").get<std::vector<std::vector<std::vector<int>>>>();
  a.accepting = j.at("accepting").get<std::vector<bool>>();
  return a;
}

std::string dpw_to_json(const Dpw& d) {
  nlohmann::json j;
  j["alphabetVars"] = d.alphabet_vars;
  j["numLetters"] = d.num_letters;
  j["numStates"] = d.num_states;
  j["initial"] = d.initial;
  j["delta"] = d.delta;
  j["color"] = d.color;
  return j.dump();
}

Dpw dpw_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Dpw d;
  d.alphabet_vars = j.at("alphabetVars").get<VarSet>();
  d.num_letters = j.at("numLetters").get<std::size_t>();
  d.num_states = j.at("numStates").get<int>();
  d.initial = j.at("initial").get<int>();
  d.delta = j.at("delta").get<std::vector<std::vector<int>>>();
  d.color = j.at("color").get<std::vector<int>>();
  return d;
}

}  // namespace bqltl
