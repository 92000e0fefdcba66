#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bqltl/games.hpp"
#include "testutil.hpp"

using namespace bqltl;

namespace {

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

// With Even's moves fixed, Odd wins from v iff some position lying on an
// odd-dominated cycle is reachable.
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
    // cycle through w using only colors <= c
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

// Enumerates Even's positional strategies; Even wins where some strategy beats
// every Odd behavior.
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

}  // namespace

TEST_CASE("trivial one-position games") {
  ParityGame g;
  g.pos.push_back({0, 2, {0}});
  auto s = zielonka_solve(g);
  CHECK(s.winner[0] == 0);
  CHECK(s.strategy[0] == 0);

  ParityGame h;
  h.pos.push_back({0, 1, {0}});
  CHECK(zielonka_solve(h).winner[0] == 1);
}

TEST_CASE("Even escapes an odd loop when allowed") {
  // 0 (Even, color 1) may loop or move to 1 (color 2, self loop)
  ParityGame g;
  g.pos.push_back({0, 1, {0, 1}});
  g.pos.push_back({1, 2, {1}});
  auto s = zielonka_solve(g);
  CHECK(s.winner[0] == 0);
  CHECK(s.strategy[0] == 1);
  CHECK(s.winner[1] == 0);
}

TEST_CASE("Odd controls the choice") {
  ParityGame g;
  g.pos.push_back({1, 0, {1, 2}});
  g.pos.push_back({0, 1, {1}});
  g.pos.push_back({0, 2, {2}});
  auto s = zielonka_solve(g);
  CHECK(s.winner[0] == 1);
  CHECK(s.winner[1] == 1);
  CHECK(s.winner[2] == 0);
}

TEST_CASE("dead ends are rejected") {
  ParityGame g;
  g.pos.push_back({0, 0, {}});
  CHECK_THROWS(zielonka_solve(g));
}

TEST_CASE("solver agrees with strategy enumeration on random games") {
  std::mt19937 rng(71);
  for (int i = 0; i < 200; ++i) {
    auto g = random_game(rng, 8);
    auto sol = zielonka_solve(g);
    auto expect = brute_force_winners(g);
    for (std::size_t v = 0; v < g.pos.size(); ++v) CHECK(sol.winner[v] == int(expect[v]));

    std::vector<int> even_region;
    for (std::size_t v = 0; v < g.pos.size(); ++v)
      if (sol.winner[v] == 0) even_region.push_back(int(v));
    CHECK(validate_even_strategy(g, sol.strategy, even_region));
  }
}

TEST_CASE("validate_even_strategy rejects a losing strategy") {
  // Even at 0 can win by going to 1, loses by looping on color 1.
  ParityGame g;
  g.pos.push_back({0, 1, {0, 1}});
  g.pos.push_back({1, 2, {1}});
  std::vector<int> bad{0, -1};
  CHECK(!validate_even_strategy(g, bad, {0, 1}));
  std::vector<int> good{1, -1};
  CHECK(validate_even_strategy(g, good, {0, 1}));
}

TEST_CASE("round game: copying the input wins G(x<->y)") {
  auto d = nbw_to_dpw(ltl_to_nbw(mk_globally(mk_iff(mk_atom("x"), mk_atom("y"))),
                                 {"x", "y"}));
  std::vector<QuantBlock> xy{{false, {"x"}}, {true, {"y"}}};
  auto m = build_multi_game(d, xy);
  auto sg = sequentialize(m);
  auto sol = zielonka_solve(sg.game);
  CHECK(sol.winner[sg.initial] == 0);
  auto ts = extract_team_strategy(m, sg, sol);
  REQUIRE(ts.has_value());

  // same matrix, but the existential block moves first
  std::vector<QuantBlock> yx{{true, {"y"}}, {false, {"x"}}};
  auto m2 = build_multi_game(d, yx);
  auto sg2 = sequentialize(m2);
  auto sol2 = zielonka_solve(sg2.game);
  CHECK(sol2.winner[sg2.initial] == 1);
  CHECK(!extract_team_strategy(m2, sg2, sol2).has_value());
}

TEST_CASE("extracted strategy survives simulation") {
  auto d = nbw_to_dpw(ltl_to_nbw(mk_globally(mk_iff(mk_atom("x"), mk_atom("y"))),
                                 {"x", "y"}));
  std::vector<QuantBlock> blocks{{false, {"x"}}, {true, {"y"}}};
  auto m = build_multi_game(d, blocks);
  auto sg = sequentialize(m);
  auto ts = extract_team_strategy(m, sg, zielonka_solve(sg.game));
  REQUIRE(ts.has_value());

  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto px = bqltl::test::random_lasso(rng, {"x"}, 2, 3);
    // fold the strategy against the input lasso until (state, position) repeats
    std::map<std::pair<int, std::size_t>, std::size_t> seen;
    std::vector<std::uint32_t> letters;
    int s = m.arena.initial;
    std::size_t pos = 0;
    for (;;) {
      auto key = std::make_pair(s, normalize_position(px, pos));
      auto it = seen.find(key);
      if (it != seen.end()) {
        std::vector<std::uint32_t> stem(letters.begin(), letters.begin() + it->second);
        std::vector<std::uint32_t> loop(letters.begin() + it->second, letters.end());
        CHECK(dpw_accepts_letters(d, stem, loop));
        break;
      }
      seen[key] = letters.size();
      std::uint32_t packed = 0;
      // block 0 is universal: take x from the lasso
      if (letter(px, pos).count("x")) packed |= 1u << m.shift[0];
      std::uint32_t y = (*ts).choice[1][(std::size_t(s) << m.shift[1]) + packed];
      packed |= y << m.shift[1];
      std::uint32_t full = 0;
      if (packed & (1u << m.shift[0])) full |= 1u << 0;  // bit of x
      if (packed & (1u << m.shift[1])) full |= 1u << 1;  // bit of y
      letters.push_back(full);
      s = m.arena.delta[s][full];
      ++pos;
    }
  }
}

TEST_CASE("round game over an empty alphabet") {
  auto d = nbw_to_dpw(ltl_to_nbw(mk_true(), {}));
  auto m = build_multi_game(d, {});
  auto sg = sequentialize(m);
  auto sol = zielonka_solve(sg.game);
  CHECK(sol.winner[sg.initial] == 0);
}
