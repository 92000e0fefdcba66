// Acceptance harness: one pass/fail line per criterion, exit code = number of
// failed criteria.  Each criterion is self-contained; witness validations are
// tallied globally and reported by the final criterion.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "bqltl/errors.hpp"
#include "bqltl/games.hpp"
#include "bqltl/solver.hpp"
#include "bqltl/tree_automata.hpp"
#include "bqltl/word_automata.hpp"
#include "testutil.hpp"

using namespace bqltl;

namespace {

int witness_checks = 0;
int witness_failures = 0;

// Validates a Sat verdict's family and feeds the round-trip tally.
bool witness_ok(const Verdict& v, const QuantifiedFormula& f, Mode mode) {
  if (v.status != Status::Sat || !v.family) return false;
  ++witness_checks;
  bool ok = check_conformance(*v.family, f.prefix, mode) &&
            validate(*v.family, f.matrix, f.prefix).ok;
  if (!ok) ++witness_failures;
  return ok;
}

QuantifiedFormula qf(std::vector<QuantBlock> prefix, MatrixPtr m) {
  return {std::move(prefix), std::move(m)};
}

// --- criterion 1: the example matrix ---------------------------------------

bool example_matrix() {
  auto f1 = qf({{false, {"x"}}, {true, {"y"}}},
               mk_iff(mk_globally(mk_atom("x")), mk_atom("y")));
  auto f2 = qf({{true, {"y"}}, {false, {"x"}}},
               mk_iff(mk_eventually(mk_atom("x")), mk_eventually(mk_atom("y"))));
  auto f3 = qf({{true, {"y"}}},
               mk_globally(mk_and(mk_atom("y"), mk_next(mk_not(mk_atom("y"))))));

  bool ok = true;
  ok &= solve_classic(f1).status == Status::Sat;
  ok &= solve_behavioral(f1).status == Status::Unsat;
  ok &= solve_weak_behavioral(f1).status == Status::Unsat;

  ok &= solve_classic(f2).status == Status::Unsat;
  ok &= solve_behavioral(f2).status == Status::Unsat;
  auto w2 = solve_weak_behavioral(f2);
  ok &= w2.status == Status::Sat && witness_ok(w2, f2, Mode::WeakBehavioral);

  ok &= solve_classic(f3).status == Status::Unsat;
  ok &= solve_behavioral(f3).status == Status::Unsat;
  ok &= solve_weak_behavioral(f3).status == Status::Unsat;
  return ok;
}

// --- criteria 2 + 3: determinacy and the implication lattice ---------------

bool determinacy_and_lattice(bool& lattice_ok) {
  std::mt19937 rng(2024);
  bool det_ok = true;
  lattice_ok = true;
  for (int i = 0; i < 100; ++i) {
    auto f = test::random_formula(rng, 2, 2, 8);
    Status c, cn, b = Status::Unknown, w = Status::Unknown;
    try {
      c = solve_classic(f).status;
      cn = solve_classic(negate(f)).status;
    } catch (const ResourceError&) {
      det_ok = false;
      continue;
    }
    if ((c == Status::Sat) == (cn == Status::Sat)) det_ok = false;
    try {
      auto vb = solve_behavioral(f);
      b = vb.status;
      if (b == Status::Sat && !witness_ok(vb, close_formula(f), Mode::Behavioral))
        lattice_ok = false;
    } catch (const ResourceError&) {
    }
    try {
      auto vw = solve_weak_behavioral(f);
      w = vw.status;
      if (w == Status::Sat &&
          !witness_ok(vw, close_formula(f), Mode::WeakBehavioral))
        lattice_ok = false;
    } catch (const ResourceError&) {
    }
    if (b == Status::Sat && c == Status::Unsat) lattice_ok = false;
    if (b == Status::Sat && w == Status::Unsat) lattice_ok = false;
  }
  return det_ok;
}

// --- criterion 4: fragment collapse ----------------------------------------

bool fragment_collapse() {
  std::mt19937 rng(2025);
  std::vector<std::vector<bool>> shapes = {{true}, {false}, {true, false}};
  for (int i = 0; i < 50; ++i) {
    auto f = random_formula_shaped(rng, shapes[i % 3], 1, 8);
    auto vb = solve_behavioral(f);
    if (vb.status != solve_classic(f).status) return false;
    if (vb.status == Status::Sat &&
        !witness_ok(vb, close_formula(f), Mode::Behavioral))
      return false;
  }
  return true;
}

// --- criterion 5: single dependency step, three routes ----------------------

bool single_step_coincidence() {
  std::mt19937 rng(2026);
  for (int i = 0; i < 50; ++i) {
    auto f = random_formula_shaped(rng, {false, true}, 1, 8);
    auto vb = solve_behavioral(f);
    auto vw = solve_weak_behavioral(f);
    if (vb.status != vw.status) return false;
    if (vb.status != Status::Sat) continue;
    if (!witness_ok(vb, f, Mode::Behavioral)) return false;
    if (!witness_ok(vw, f, Mode::WeakBehavioral)) return false;
    auto d = nbw_to_dpw(ltl_to_nbw(f.matrix, {f.prefix[0].vars[0],
                                              f.prefix[1].vars[0]}));
    int bound = std::min(d.num_states, 8);
    try {
      auto vo = enumerate_oracle(f, Mode::Behavioral, bound);
      if (vo.status != Status::Sat) return false;
      if (!witness_ok(vo, f, Mode::Behavioral)) return false;
    } catch (const ResourceError&) {
      // bounded search ran out of candidates; not a disagreement
    }
  }
  return true;
}

// --- criterion 6: word automata against independent oracles -----------------

bool word_automata_oracles() {
  std::mt19937 rng(2027);
  VarSet vars = {"x", "y"};
  int pairs = 0;
  for (int i = 0; i < 260; ++i) {
    auto m = test::random_matrix(rng, vars, 7);
    auto a = ltl_to_nbw(m, vars);
    for (int j = 0; j < 4; ++j) {
      auto pi = test::random_lasso(rng, vars, 2, 3);
      if (nbw_accepts_lasso(a, pi) != eval_ltl(m, pi, 0)) return false;
      ++pairs;
    }
  }
  if (pairs < 1000) return false;

  for (int i = 0; i < 40; ++i) {
    auto m = test::random_matrix(rng, vars, 6);
    auto a = ltl_to_nbw(m, vars);
    auto c = complement(a);
    if (!emptiness(product(a, c)).empty) return false;
    auto d = nbw_to_dpw(a);
    for (int j = 0; j < 5; ++j) {
      auto pi = test::random_lasso(rng, vars, 2, 3);
      bool in = nbw_accepts_lasso(a, pi);
      if (nbw_accepts_lasso(c, pi) == in) return false;
      if (dpw_accepts_lasso(d, pi) != in) return false;
    }
  }
  return true;
}

// --- criterion 7: tree pipeline micro-suite ---------------------------------

// label must equal the direction just taken; `flip` rejects one of the states
TreeAutomaton last_direction_automaton(int initial, bool flip) {
  TreeAutomaton a;
  a.dir_vars = {"u"};
  a.label_vars = {"p"};
  a.num_states = 2;
  a.initial = initial;
  a.delta.assign(2, std::vector<TDnf>(2));
  a.color = {0, 0};
  for (int q = 0; q < 2; ++q) {
    if (flip && q == 1) continue;
    TConj f(2);
    f[0] = {0};
    f[1] = {1};
    a.delta[q][q] = {f};
  }
  return a;
}

TreeAutomaton eventually_label_automaton() {
  TreeAutomaton a;  // on every branch the label 1 must appear
  a.dir_vars = {"u"};
  a.label_vars = {"p"};
  a.num_states = 2;
  a.initial = 0;
  a.delta.assign(2, std::vector<TDnf>(2));
  a.color = {1, 0};
  TConj wait(2), done(2);
  wait[0] = {0};
  wait[1] = {0};
  done[0] = {1};
  done[1] = {1};
  a.delta[0][0] = {wait};
  a.delta[0][1] = {done};
  a.delta[1][0] = {done};
  a.delta[1][1] = {done};
  return a;
}

TreeAutomaton alternating_both_automaton() {
  TreeAutomaton a;  // conjunction: constant-0 labels and constant successors
  a.dir_vars = {"u"};
  a.label_vars = {"p"};
  a.num_states = 2;
  a.initial = 0;
  a.delta.assign(2, std::vector<TDnf>(2));
  a.color = {0, 0};
  TConj both(2);
  both[0] = {0, 1};
  both[1] = {0, 1};
  a.delta[0][0] = {both};
  a.delta[1][0] = {TConj{{1}, {1}}};
  return a;
}

TreeAutomaton random_micro(std::mt19937& rng) {
  TreeAutomaton a;
  a.dir_vars = {"u"};
  a.label_vars = {"p"};
  a.num_states = 2;
  a.initial = 0;
  a.delta.assign(2, std::vector<TDnf>(2));
  a.color.resize(2);
  for (int q = 0; q < 2; ++q) {
    a.color[q] = int(rng() % 3);
    for (int lab = 0; lab < 2; ++lab) {
      int conjs = int(rng() % 3);
      for (int c = 0; c < conjs; ++c) {
        TConj f(2);
        for (int d = 0; d < 2; ++d) {
          int m = int(rng() % 3);
          std::set<int> ss;
          for (int k = 0; k < m; ++k) ss.insert(int(rng() % 2));
          f[d].assign(ss.begin(), ss.end());
        }
        a.delta[q][lab].push_back(std::move(f));
      }
    }
  }
  return a;
}

bool tree_micro_suite() {
  std::vector<TreeAutomaton> suite = {
      last_direction_automaton(0, false), last_direction_automaton(1, false),
      last_direction_automaton(0, true), last_direction_automaton(1, true),
      eventually_label_automaton(), alternating_both_automaton()};
  std::mt19937 rng(2028);
  while (suite.size() < 12) suite.push_back(random_micro(rng));

  auto trees = enumerate_trees({"u"}, {"p"}, 2, 100);
  for (const auto& a : suite) {
    auto n = ndet(a);
    if (!n.is_nondeterministic()) return false;
    for (const auto& t : trees)
      if (tree_member(n, t) != tree_member(a, t)) return false;
    // a change stage that guesses nothing and keeps every direction must not
    // move the emptiness verdict
    auto idle = change(n, {}, n.dir_vars);
    if (apt_emptiness(idle).empty != apt_emptiness(a).empty) return false;
  }
  return true;
}

// --- criterion 8: game solver against positional enumeration ----------------

ParityGame random_game(std::mt19937& rng, int max_pos) {
  int n = 1 + int(rng() % max_pos);
  ParityGame g;
  g.pos.resize(n);
  for (auto& p : g.pos) {
    p.owner = rng() % 2;
    p.color = rng() % 5;
    int deg = 1 + int(rng() % 3);
    for (int i = 0; i < deg; ++i) p.succ.push_back(int(rng() % n));
    std::sort(p.succ.begin(), p.succ.end());
    p.succ.erase(std::unique(p.succ.begin(), p.succ.end()), p.succ.end());
  }
  return g;
}

std::vector<int> odd_wins_under(const ParityGame& g, const std::vector<int>& choice) {
  int n = int(g.pos.size());
  auto succs = [&](int v) -> std::vector<int> {
    if (g.pos[v].owner == 0) return {choice[v]};
    return g.pos[v].succ;
  };
  std::vector<char> bad(n, 0);
  for (int w = 0; w < n; ++w) {
    int c = g.pos[w].color;
    if (c % 2 == 0) continue;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{w};
    bool cyc = false;
    while (!stack.empty() && !cyc) {
      int v = stack.back();
      stack.pop_back();
      for (int u : succs(v)) {
        if (g.pos[u].color > c) continue;
        if (u == w) {
          cyc = true;
          break;
        }
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    if (cyc) bad[w] = 1;
  }
  std::vector<int> odd(n, 0);
  for (int v = 0; v < n; ++v) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      if (bad[u]) {
        odd[v] = 1;
        break;
      }
      for (int w : succs(u))
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return odd;
}

std::vector<int> brute_force_winners(const ParityGame& g) {
  int n = int(g.pos.size());
  std::vector<int> even_pos;
  for (int v = 0; v < n; ++v)
    if (g.pos[v].owner == 0) even_pos.push_back(v);
  std::vector<int> winner(n, 1);
  std::vector<int> choice(n, -1);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == even_pos.size()) {
      auto odd = odd_wins_under(g, choice);
      for (int v = 0; v < n; ++v)
        if (!odd[v]) winner[v] = 0;
      return;
    }
    for (int s : g.pos[even_pos[i]].succ) {
      choice[even_pos[i]] = s;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return winner;
}

bool game_solver_oracle() {
  std::mt19937 rng(2029);
  for (int i = 0; i < 50; ++i) {
    auto g = random_game(rng, 8);
    if (zielonka_solve(g).winner != brute_force_winners(g)) return false;
  }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool ok;
  };
  std::vector<Criterion> results;
  bool lattice_ok = false;

  auto timed = [](auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = fn();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                   .count();
    return std::pair<bool, double>(ok, s);
  };

  auto [ok1, t1] = timed(example_matrix);
  results.push_back({"1 example verdict matrix", ok1 && t1 < 60});

  auto [ok2, t2] = timed([&] { return determinacy_and_lattice(lattice_ok); });
  results.push_back({"2 classic determinacy on 100 random formulas", ok2 && t2 < 300});
  results.push_back({"3 implication lattice with zero violations", lattice_ok});

  auto [ok4, t4] = timed(fragment_collapse);
  results.push_back({"4 fragment collapse on 50 formulas", ok4});

  auto [ok5, t5] = timed(single_step_coincidence);
  results.push_back({"5 single-step route agreement on 50 formulas", ok5 && t5 < 600});

  auto [ok6, t6] = timed(word_automata_oracles);
  results.push_back({"6 word automata oracles on 1000+ pairs", ok6 && t6 < 300});

  auto [ok7, t7] = timed(tree_micro_suite);
  results.push_back({"7 tree pipeline micro-suite", ok7});

  auto [ok8, t8] = timed(game_solver_oracle);
  results.push_back({"8 game solver vs positional enumeration", ok8});

  results.push_back({"9 witness round-trip with zero failures",
                     witness_checks > 0 && witness_failures == 0});

  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s: %s\n", r.name, r.ok ? "PASS" : "FAIL");
    if (!r.ok) ++failed;
  }
  std::printf("witness validations: %d, failures: %d\n", witness_checks,
              witness_failures);
  return failed;
}
