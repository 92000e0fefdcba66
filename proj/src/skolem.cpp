#include "bqltl/skolem.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bqltl/errors.hpp"
#include "bqltl/word_automata.hpp"

namespace bqltl {

namespace {

VarSet universal_vars(const std::vector<QuantBlock>& prefix) {
  VarSet u;
  for (const auto& b : prefix)
    if (!b.exists) u = vs_union(u, b.vars);
  return u;
}

VarSet existential_vars(const std::vector<QuantBlock>& prefix) {
  VarSet e;
  for (const auto& b : prefix)
    if (b.exists) e = vs_union(e, b.vars);
  return e;
}

std::uint32_t restrict_letter(const VarSet& from, std::uint32_t idx, const VarSet& to) {
  return letter_index(to, [&] {
    Letter full = letter_set(from, idx);
    Letter out;
    for (const auto& v : full)
      if (vs_contains(to, v)) out.insert(v);
    return out;
  }());
}

}  // namespace

MealySkolem mealy_from_tree(const RegularTree& t) {
  MealySkolem m;
  m.block = t.label_vars;
  m.inputs = t.dir_vars;
  m.dep_now = t.dir_vars;
  m.memory = t.num_states;
  m.initial = t.initial;
  std::size_t nd = letter_count(t.dir_vars);
  m.update.assign(m.memory, std::vector<int>(nd));
  m.output.assign(m.memory, std::vector<std::uint32_t>(nd));
  for (int s = 0; s < m.memory; ++s)
    for (std::uint32_t d = 0; d < nd; ++d) {
      m.update[s][d] = t.next[s][d];
      m.output[s][d] = t.label[t.next[s][d]];
    }
  return m;
}

RegularTree tree_from_mealy(const MealySkolem& m) {
  if (m.inputs != m.dep_now)
    throw std::invalid_argument("tree_from_mealy: split visibility has no tree form");
  std::size_t nd = letter_count(m.inputs);
  RegularTree t;
  t.dir_vars = m.inputs;
  t.label_vars = m.block;
  // tree state (mem, d): pre-update memory mem entered via direction d, so
  // the node carries output(mem, d); the root gets a dummy label
  t.num_states = 1 + int(m.memory * nd);
  t.initial = 0;
  auto sid = [&](int mem, std::uint32_t d) { return 1 + int(mem * nd + d); };
  t.label.assign(t.num_states, 0);
  t.next.assign(t.num_states, std::vector<int>(nd));
  for (int mem = 0; mem < m.memory; ++mem)
    for (std::uint32_t d = 0; d < nd; ++d) {
      int s = sid(mem, d);
      t.label[s] = m.output[mem][d];
      int nm = m.update[mem][d];
      for (std::uint32_t d2 = 0; d2 < nd; ++d2) t.next[s][d2] = sid(nm, d2);
    }
  for (std::uint32_t d = 0; d < nd; ++d) t.next[0][d] = sid(m.initial, d);
  return t;
}

MealySkolem constant_mealy(const LassoTrace& values) {
  MealySkolem m;
  m.block = values.universe;
  m.inputs = {};
  m.dep_now = {};
  std::size_t n = values.num_positions();
  m.memory = int(n);
  m.initial = 0;
  m.update.assign(m.memory, std::vector<int>(1));
  m.output.assign(m.memory, std::vector<std::uint32_t>(1));
  for (std::size_t k = 0; k < n; ++k) {
    m.output[k][0] = letter_index(values.universe, letter(values, k));
    m.update[k][0] = int(k + 1 < n ? k + 1 : values.period_start());
  }
  return m;
}

LassoTrace apply(const MealyFamily& family, const LassoTrace& pi) {
  VarSet joint = pi.universe;
  for (const auto& m : family) {
    if (!vs_disjoint(m.block, joint))
      throw std::invalid_argument("apply: block variables collide");
    joint = vs_union(joint, m.block);
    if (!vs_subset(m.inputs, pi.universe) || !vs_subset(m.dep_now, pi.universe))
      throw std::invalid_argument("apply: machine reads outside the trace universe");
  }
  std::vector<int> mems;
  for (const auto& m : family) mems.push_back(m.initial);

  std::map<std::pair<std::size_t, std::vector<int>>, std::size_t> seen;
  std::vector<Letter> letters;
  std::size_t pos = 0;
  for (;;) {
    auto key = std::make_pair(normalize_position(pi, pos), mems);
    auto it = seen.find(key);
    if (it != seen.end()) {
      std::vector<Letter> stem(letters.begin(), letters.begin() + it->second);
      std::vector<Letter> loop(letters.begin() + it->second, letters.end());
      return make_lasso(joint, std::move(stem), std::move(loop));
    }
    seen[key] = letters.size();
    Letter cur = letter(pi, pos);
    Letter out = cur;
    for (std::size_t i = 0; i < family.size(); ++i) {
      const auto& m = family[i];
      std::uint32_t dep = letter_index(m.dep_now, [&] {
        Letter l;
        for (const auto& v : cur)
          if (vs_contains(m.dep_now, v)) l.insert(v);
        return l;
      }());
      for (const auto& v : letter_set(m.block, m.output[mems[i]][dep])) out.insert(v);
    }
    for (std::size_t i = 0; i < family.size(); ++i) {
      const auto& m = family[i];
      std::uint32_t in = letter_index(m.inputs, [&] {
        Letter l;
        for (const auto& v : cur)
          if (vs_contains(m.inputs, v)) l.insert(v);
        return l;
      }());
      mems[i] = m.update[mems[i]][in];
    }
    letters.push_back(std::move(out));
    ++pos;
  }
}

bool check_conformance(const MealyFamily& family,
                       const std::vector<QuantBlock>& prefix, Mode mode) {
  VarSet univ = universal_vars(prefix);
  std::size_t fi = 0;
  for (std::size_t b = 0; b < prefix.size(); ++b) {
    if (!prefix[b].exists) continue;
    if (fi >= family.size()) return false;
    const auto& m = family[fi++];
    if (m.block != prefix[b].vars) return false;
    VarSet depv = dep(prefix, b, {});
    VarSet past = mode == Mode::Behavioral ? depv : univ;
    if (!vs_subset(m.inputs, past)) return false;
    if (!vs_subset(m.dep_now, depv)) return false;
    if (int(m.update.size()) != m.memory || int(m.output.size()) != m.memory)
      return false;
  }
  return fi == family.size();
}

namespace {

// `neg` recognizes the violations of the matrix over all variables; the
// product below drives it with the universal letter completed by the family.
ValidateResult validate_core(const Nbw& neg, const MealyFamily& family,
                             const VarSet& univ) {
  const VarSet& all = neg.alphabet_vars;
  std::size_t nu = letter_count(univ);
  struct Node {
    int b;
    std::vector<int> mems;
    auto operator<=>(const Node&) const = default;
  };
  std::map<Node, int> ids;
  std::vector<Node> nodes;
  auto intern = [&](Node n) {
    auto it = ids.find(n);
    if (it != ids.end()) return it->second;
    int id = int(nodes.size());
    ids.emplace(n, id);
    nodes.push_back(std::move(n));
    return id;
  };
  Node init{neg.initial, {}};
  for (const auto& m : family) init.mems.push_back(m.initial);
  int start = intern(init);

  std::vector<std::vector<std::vector<int>>> delta;
  std::vector<bool> accepting;
  std::queue<int> work;
  work.push(start);
  while (!work.empty()) {
    int id = work.front();
    work.pop();
    if (int(delta.size()) <= id) {
      delta.resize(nodes.size());
      accepting.resize(nodes.size());
    }
    if (!delta[id].empty()) continue;
    delta[id].assign(nu, {});
    Node n = nodes[id];
    accepting[id] = neg.accepting[n.b];
    for (std::uint32_t u = 0; u < nu; ++u) {
      Letter cur = letter_set(univ, u);
      Letter full = cur;
      Node nxt = n;
      for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& m = family[i];
        Letter depl, inl;
        for (const auto& v : cur) {
          if (vs_contains(m.dep_now, v)) depl.insert(v);
          if (vs_contains(m.inputs, v)) inl.insert(v);
        }
        std::uint32_t y = m.output[n.mems[i]][letter_index(m.dep_now, depl)];
        for (const auto& v : letter_set(m.block, y)) full.insert(v);
        nxt.mems[i] = m.update[n.mems[i]][letter_index(m.inputs, inl)];
      }
      std::uint32_t fl = letter_index(all, full);
      for (int s : neg.succs(n.b, fl)) {
        Node t = nxt;
        t.b = s;
        int tid = intern(std::move(t));
        delta[id][u].push_back(tid);
        if (int(delta.size()) <= tid || delta[tid].empty()) work.push(tid);
      }
    }
  }
  delta.resize(nodes.size());
  accepting.resize(nodes.size());

  Nbw prod;
  prod.alphabet_vars = univ;
  prod.num_letters = nu;
  prod.num_states = int(nodes.size());
  prod.initial = start;
  prod.delta = std::move(delta);
  prod.accepting.assign(prod.num_states, false);
  for (int i = 0; i < prod.num_states; ++i) prod.accepting[i] = accepting[i];
  for (auto& row : prod.delta)
    for (auto& ss : row) {
      std::sort(ss.begin(), ss.end());
      ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
    }

  auto e = emptiness(prod);
  ValidateResult r;
  r.ok = e.empty;
  if (!e.empty) r.counterexample = e.witness;
  return r;
}

}  // namespace

ValidateResult validate(const MealyFamily& family, const MatrixPtr& matrix,
                        const std::vector<QuantBlock>& prefix) {
  VarSet univ = universal_vars(prefix);
  VarSet all = vs_union(univ, existential_vars(prefix));
  return validate_core(ltl_to_nbw(mk_not(matrix), all), family, univ);
}

// --------------------------------------------------------------------------
// Enumeration oracle
// --------------------------------------------------------------------------

namespace {

struct MachineIter {
  VarSet block, inputs, dep_now;
  int memory_bound;
  std::size_t ni, ndep, nout;
  MealySkolem cur;

  void start() {
    cur.block = block;
    cur.inputs = inputs;
    cur.dep_now = dep_now;
    set_memory(1);
  }
  void set_memory(int m) {
    cur.memory = m;
    cur.initial = 0;
    cur.update.assign(m, std::vector<int>(ni, 0));
    cur.output.assign(m, std::vector<std::uint32_t>(ndep, 0));
  }
  // lexicographic successor; false when exhausted at memory_bound
  bool advance() {
    for (int s = cur.memory - 1; s >= 0; --s)
      for (int d = int(ndep) - 1; d >= 0; --d) {
        if (std::size_t(++cur.output[s][d]) < nout) return true;
        cur.output[s][d] = 0;
      }
    for (int s = cur.memory - 1; s >= 0; --s)
      for (int d = int(ni) - 1; d >= 0; --d) {
        if (++cur.update[s][d] < cur.memory) return true;
        cur.update[s][d] = 0;
      }
    if (cur.memory < memory_bound) {
      set_memory(cur.memory + 1);
      return true;
    }
    return false;
  }
};

}  // namespace

Verdict enumerate_oracle(const QuantifiedFormula& f, Mode mode, int memory_bound,
                         long long candidate_cap) {
  if (!is_closed(f)) throw std::invalid_argument("enumerate_oracle: formula not closed");
  if (memory_bound < 1) throw std::invalid_argument("enumerate_oracle: memory bound < 1");
  VarSet univ = universal_vars(f.prefix);
  VarSet all = vs_union(univ, existential_vars(f.prefix));
  Nbw neg = ltl_to_nbw(mk_not(f.matrix), all);

  std::vector<MachineIter> iters;
  for (std::size_t b = 0; b < f.prefix.size(); ++b) {
    if (!f.prefix[b].exists) continue;
    MachineIter it;
    it.block = f.prefix[b].vars;
    VarSet depv = dep(f.prefix, b, {});
    it.dep_now = depv;
    it.inputs = mode == Mode::Behavioral ? depv : univ;
    it.memory_bound = memory_bound;
    it.ni = letter_count(it.inputs);
    it.ndep = letter_count(it.dep_now);
    it.nout = letter_count(it.block);
    it.start();
    iters.push_back(std::move(it));
  }

  Verdict v;
  if (iters.empty()) {
    // no existential blocks: the empty family either validates or nothing does
    auto r = validate_core(neg, {}, univ);
    v.status = r.ok ? Status::Sat : Status::Unsat;
    if (r.ok) v.family = MealyFamily{};
    else v.counterexample = r.counterexample;
    return v;
  }

  long long tried = 0;
  for (;;) {
    if (++tried > candidate_cap)
      throw ResourceError("oracle enumeration",
                          std::to_string(candidate_cap) + " candidate families");
    MealyFamily fam;
    for (const auto& it : iters) fam.push_back(it.cur);
    auto r = validate_core(neg, fam, univ);
    if (r.ok) {
      v.status = Status::Sat;
      v.family = std::move(fam);
      return v;
    }
    // odometer over the family, last block fastest
    std::size_t i = iters.size();
    for (;;) {
      if (i == 0) {
        v.status = Status::Unknown;
        return v;
      }
      --i;
      if (iters[i].advance()) break;
      iters[i].start();
    }
  }
}

// --------------------------------------------------------------------------
// Tree decomposition
// --------------------------------------------------------------------------

std::vector<RegularTree> decompose(const RegularTree& joint,
                                   const std::vector<QuantBlock>& prefix) {
  VarSet univ = universal_vars(prefix);
  if (joint.dir_vars != univ)
    throw std::invalid_argument("decompose: joint tree directions are not the universal vars");
  std::size_t nfull = letter_count(univ);

  std::vector<RegularTree> out;
  for (std::size_t b = 0; b < prefix.size(); ++b) {
    if (!prefix[b].exists) continue;
    VarSet depv = dep(prefix, b, {});
    const VarSet& y = prefix[b].vars;
    std::size_t ndep = letter_count(depv);

    auto ylabel = [&](int s) {
      Letter full = letter_set(joint.label_vars, joint.label[s]);
      Letter mine;
      for (const auto& v : full)
        if (vs_contains(y, v)) mine.insert(v);
      return letter_index(y, mine);
    };

    // subset construction over dep-projected directions
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> sets;
    auto intern = [&](std::vector<int> s) {
      auto it = ids.find(s);
      if (it != ids.end()) return it->second;
      int id = int(sets.size());
      if (id > 4096) throw ResourceError("decompose", "subset explosion");
      ids.emplace(s, id);
      sets.push_back(std::move(s));
      return id;
    };
    RegularTree t;
    t.dir_vars = depv;
    t.label_vars = y;
    t.initial = intern({joint.initial});
    std::queue<int> work;
    work.push(t.initial);
    while (!work.empty()) {
      int id = work.front();
      work.pop();
      if (int(t.next.size()) <= id) {
        t.next.resize(sets.size(), std::vector<int>(ndep, -1));
        t.label.resize(sets.size());
      }
      if (t.next[id][0] != -1) continue;  // already expanded
      std::uint32_t lab = ylabel(sets[id][0]);
      for (int s : sets[id])
        if (ylabel(s) != lab)
          throw std::invalid_argument(
              "decompose: labels of block depend on hidden directions");
      t.label[id] = lab;
      for (std::uint32_t d = 0; d < ndep; ++d) {
        std::set<int> nxt;
        for (int s : sets[id])
          for (std::uint32_t fd = 0; fd < nfull; ++fd)
            if (restrict_letter(univ, fd, depv) == d) nxt.insert(joint.next[s][fd]);
        int nid = intern(std::vector<int>(nxt.begin(), nxt.end()));
        if (int(t.next.size()) <= nid) {
          t.next.resize(sets.size(), std::vector<int>(ndep, -1));
          t.label.resize(sets.size());
        }
        if (t.next[nid][0] == -1) work.push(nid);
        t.next[id][d] = nid;
      }
    }
    t.num_states = int(sets.size());
    t.next.resize(t.num_states, std::vector<int>(ndep, -1));
    t.label.resize(t.num_states);
    out.push_back(std::move(t));
  }
  return out;
}

// --------------------------------------------------------------------------
// JSON
// --------------------------------------------------------------------------

namespace {

std::string letter_key(const VarSet& vars, std::uint32_t idx) {
  Letter l = letter_set(vars, idx);
  std::string out;
  for (const auto& v : l) {
    if (!out.empty()) out += ",";
    out += v;
  }
  return out;
}

std::uint32_t key_letter(const VarSet& vars, const std::string& key) {
  Letter l;
  std::istringstream ss(key);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) l.insert(item);
  return letter_index(vars, l);
}

std::string join_vars(const VarSet& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += ",";
    out += v;
  }
  return out;
}

VarSet split_vars(const std::string& s) {
  VarSet out;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string mealy_to_json(const MealySkolem& m) {
  nlohmann::json j;
  j["block"] = join_vars(m.block);
  std::vector<int> mem(m.memory);
  for (int i = 0; i < m.memory; ++i) mem[i] = i;
  j["memory"] = mem;
  j["initial"] = m.initial;
  nlohmann::json upd = nlohmann::json::object();
  nlohmann::json outp = nlohmann::json::object();
  for (int s = 0; s < m.memory; ++s) {
    for (std::size_t d = 0; d < m.update[s].size(); ++d)
      upd[std::to_string(s) + "|" + letter_key(m.inputs, std::uint32_t(d))] =
          m.update[s][d];
    for (std::size_t d = 0; d < m.output[s].size(); ++d) {
      std::vector<std::string> ys;
      for (const auto& v : letter_set(m.block, m.output[s][d])) ys.push_back(v);
      outp[std::to_string(s) + "|" + letter_key(m.dep_now, std::uint32_t(d))] = ys;
    }
  }
  j["update"] = upd;
  j["output"] = outp;
  j["reads"] = m.inputs;
  j["readsNow"] = m.dep_now;
  return j.dump();
}

MealySkolem mealy_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MealySkolem m;
  m.block = split_vars(j.at("block").get<std::string>());
  m.inputs = j.at("reads").get<VarSet>();
  m.dep_now = j.at("readsNow").get<VarSet>();
  m.memory = int(j.at("memory").size());
  m.initial = j.at("initial").get<int>();
  std::size_t ni = letter_count(m.inputs);
  std::size_t ndep = letter_count(m.dep_now);
  m.update.assign(m.memory, std::vector<int>(ni, 0));
  m.output.assign(m.memory, std::vector<std::uint32_t>(ndep, 0));
  for (const auto& [key, val] : j.at("update").items()) {
    auto bar = key.find('|');
    int s = std::stoi(key.substr(0, bar));
    m.update[s][key_letter(m.inputs, key.substr(bar + 1))] = val.get<int>();
  }
  for (const auto& [key, val] : j.at("output").items()) {
    auto bar = key.find('|');
    int s = std::stoi(key.substr(0, bar));
    Letter l;
    for (const auto& v : val) l.insert(v.get<std::string>());
    m.output[s][key_letter(m.dep_now, key.substr(bar + 1))] = letter_index(m.block, l);
  }
  return m;
}

}  // namespace bqltl
