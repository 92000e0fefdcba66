#include "bqltl/games.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace bqltl {

// --------------------------------------------------------------------------
// Zielonka's recursive algorithm with positional strategy extraction
// --------------------------------------------------------------------------

namespace {

struct Zielonka {
  const ParityGame& g;
  std::vector<std::vector<int>> pred;
  std::vector<int> winner, strat;

  explicit Zielonka(const ParityGame& game) : g(game) {
    int n = int(g.pos.size());
    pred.resize(n);
    for (int v = 0; v < n; ++v) {
      if (g.pos[v].succ.empty())
        throw std::invalid_argument("parity game has a dead-end position");
      for (int w : g.pos[v].succ) pred[w].push_back(v);
    }
    winner.assign(n, -1);
    strat.assign(n, -1);
    std::vector<char> in(n, 1);
    solve(in, n);
  }

  // Attractor of player p to `target` inside subgame `in`; marks attracted
  // positions in `attr` and records p's attractor moves in strat.
  std::vector<int> attractor(const std::vector<char>& in, int p,
                             const std::vector<int>& target,
                             std::vector<char>& attr) {
    std::vector<int> out = target;
    std::queue<int> work;
    for (int v : target) {
      attr[v] = 1;
      work.push(v);
    }
    std::vector<int> missing(g.pos.size(), 0);
    for (std::size_t v = 0; v < g.pos.size(); ++v)
      if (in[v] && g.pos[v].owner != p)
        for (int w : g.pos[v].succ)
          if (in[w]) ++missing[v];
    while (!work.empty()) {
      int w = work.front();
      work.pop();
      for (int v : pred[w]) {
        if (!in[v] || attr[v]) continue;
        if (g.pos[v].owner == p) {
          attr[v] = 1;
          strat[v] = w;
          out.push_back(v);
          work.push(v);
        } else if (--missing[v] == 0) {
          attr[v] = 1;
          out.push_back(v);
          work.push(v);
        }
      }
    }
    return out;
  }

  void solve(std::vector<char>& in, int count) {
    if (count == 0) return;
    int c = -1;
    for (std::size_t v = 0; v < in.size(); ++v)
      if (in[v]) c = std::max(c, g.pos[v].color);
    int p = (c % 2 == 0) ? 0 : 1;
    std::vector<int> target;
    for (std::size_t v = 0; v < in.size(); ++v)
      if (in[v] && g.pos[v].color == c) target.push_back(int(v));
    std::vector<char> attr(in.size(), 0);
    auto A = attractor(in, p, target, attr);

    std::vector<char> rest = in;
    for (int v : A) rest[v] = 0;
    solve(rest, count - int(A.size()));

    std::vector<int> opp;
    for (std::size_t v = 0; v < in.size(); ++v)
      if (rest[v] && winner[v] == 1 - p) opp.push_back(int(v));

    if (opp.empty()) {
      for (int v : A) winner[v] = p;
      for (int v : target)
        if (g.pos[v].owner == p) {
          strat[v] = -1;
          for (int w : g.pos[v].succ)
            if (in[w]) {
              strat[v] = w;
              break;
            }
        }
      return;
    }

    std::vector<char> battr(in.size(), 0);
    auto B = attractor(in, 1 - p, opp, battr);
    for (int v : B) winner[v] = 1 - p;
    std::vector<char> rem = in;
    for (int v : B) rem[v] = 0;
    solve(rem, count - int(B.size()));
  }
};

}  // namespace

GameSolution zielonka_solve(const ParityGame& g) {
  Zielonka z(g);
  GameSolution s;
  s.winner = std::move(z.winner);
  s.strategy = std::move(z.strat);
  for (std::size_t v = 0; v < g.pos.size(); ++v)
    if (s.winner[v] != g.pos[v].owner) s.strategy[v] = -1;
  return s;
}

bool validate_even_strategy(const ParityGame& g, const std::vector<int>& strategy,
                            const std::vector<int>& region) {
  std::vector<char> in(g.pos.size(), 0);
  for (int v : region) in[v] = 1;
  // closure under the restricted moves; leaving the region means the
  // strategy was not winning there.
  auto moves = [&](int v) -> std::vector<int> {
    if (g.pos[v].owner == 0) {
      if (strategy[v] < 0) return {};
      return {strategy[v]};
    }
    return g.pos[v].succ;
  };
  for (int v : region) {
    auto ms = moves(v);
    if (ms.empty()) return false;
    for (int w : ms)
      if (!in[w]) return false;
  }
  int maxc = 0;
  for (int v : region) maxc = std::max(maxc, g.pos[v].color);
  for (int c = 1; c <= maxc; c += 2) {
    // subgraph of colors <= c: no cycle may pass through a color-c position
    std::vector<char> sub(g.pos.size(), 0);
    for (int v : region)
      if (g.pos[v].color <= c) sub[v] = 1;
    // Tarjan SCC on the restricted subgraph
    int n = int(g.pos.size());
    std::vector<int> num(n, -1), low(n), comp(n, -1), stk;
    std::vector<char> on(n, 0);
    int counter = 0, comps = 0;
    struct Frame {
      int v;
      std::vector<int> succ;
      std::size_t i = 0;
    };
    for (int root = 0; root < n; ++root) {
      if (!sub[root] || num[root] != -1) continue;
      std::vector<Frame> call;
      call.push_back({root, moves(root)});
      num[root] = low[root] = counter++;
      stk.push_back(root);
      on[root] = 1;
      while (!call.empty()) {
        Frame& f = call.back();
        bool descended = false;
        while (f.i < f.succ.size()) {
          int w = f.succ[f.i++];
          if (!sub[w]) continue;
          if (num[w] == -1) {
            num[w] = low[w] = counter++;
            stk.push_back(w);
            on[w] = 1;
            call.push_back({w, moves(w)});
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
            on[w] = 0;
            comp[w] = comps;
            if (w == v) break;
          }
          ++comps;
        }
      }
    }
    std::vector<int> comp_size(comps, 0);
    for (int v = 0; v < n; ++v)
      if (sub[v] && comp[v] >= 0) ++comp_size[comp[v]];
    for (int v = 0; v < n; ++v) {
      if (!sub[v] || g.pos[v].color != c) continue;
      bool self = false;
      for (int w : moves(v))
        if (w == v) self = true;
      if (self) return false;
      if (comp[v] >= 0 && comp_size[comp[v]] > 1) return false;
    }
  }
  return true;
}

// --------------------------------------------------------------------------
// Round-based quantifier game
// --------------------------------------------------------------------------

MultiParityGame build_multi_game(const Dpw& d, const std::vector<QuantBlock>& prefix) {
  MultiParityGame m;
  m.arena = d;
  m.blocks = prefix;
  VarSet all;
  for (const auto& b : prefix) all = vs_union(all, b.vars);
  if (all != d.alphabet_vars)
    throw std::invalid_argument("build_multi_game: prefix does not partition the alphabet");
  if (letter_count(d.alphabet_vars) != d.num_letters)
    throw std::invalid_argument("build_multi_game: arena has a bare-letter alphabet");
  int shift = 0;
  for (const auto& b : prefix) {
    std::vector<int> bits;
    for (const auto& v : b.vars) {
      auto it = std::lower_bound(d.alphabet_vars.begin(), d.alphabet_vars.end(), v);
      bits.push_back(int(it - d.alphabet_vars.begin()));
    }
    m.bit.push_back(std::move(bits));
    m.shift.push_back(shift);
    m.mask.push_back((std::uint32_t(1) << b.vars.size()) - 1);
    shift += int(b.vars.size());
  }
  return m;
}

namespace {

std::uint32_t packed_to_letter(const MultiParityGame& m, std::uint32_t packed) {
  std::uint32_t letter = 0;
  for (std::size_t i = 0; i < m.blocks.size(); ++i) {
    std::uint32_t local = (packed >> m.shift[i]) & m.mask[i];
    for (std::size_t j = 0; j < m.bit[i].size(); ++j)
      if (local & (std::uint32_t(1) << j)) letter |= std::uint32_t(1) << m.bit[i][j];
  }
  return letter;
}

}  // namespace

SeqGame sequentialize(const MultiParityGame& m) {
  int k = int(m.blocks.size());
  SeqGame sg;
  sg.stage_off.resize(k + 1);
  int off = 0;
  for (int i = 0; i <= k; ++i) {
    sg.stage_off[i] = off;
    int bits = (i == k) ? (m.shift.empty() ? 0 : m.shift.back() + int(m.blocks.back().vars.size()))
                        : m.shift[i];
    off += 1 << bits;
  }
  sg.per_state = off;
  sg.initial = m.arena.initial * sg.per_state;

  int n = m.arena.num_states;
  sg.game.pos.resize(std::size_t(n) * sg.per_state);
  for (int s = 0; s < n; ++s) {
    for (int i = 0; i <= k; ++i) {
      int bits = (i == k) ? (k == 0 ? 0 : m.shift[k - 1] + int(m.blocks[k - 1].vars.size()))
                          : m.shift[i];
      for (std::uint32_t packed = 0; packed < (std::uint32_t(1) << bits); ++packed) {
        int id = s * sg.per_state + sg.stage_off[i] + int(packed);
        auto& p = sg.game.pos[id];
        p.color = m.arena.color[s];
        if (i == k) {
          p.owner = 0;
          std::uint32_t letter = packed_to_letter(m, packed);
          int t = m.arena.delta[s][letter];
          p.succ = {t * sg.per_state + sg.stage_off[0]};
        } else {
          p.owner = m.blocks[i].exists ? 0 : 1;
          for (std::uint32_t a = 0; a <= m.mask[i]; ++a) {
            std::uint32_t next = packed | (a << m.shift[i]);
            p.succ.push_back(s * sg.per_state + sg.stage_off[i + 1] + int(next));
          }
        }
      }
    }
  }
  return sg;
}

std::optional<TeamStrategy> extract_team_strategy(const MultiParityGame& m,
                                                  const SeqGame& g,
                                                  const GameSolution& sol) {
  if (sol.winner[g.initial] != 0) return std::nullopt;
  int k = int(m.blocks.size());
  int n = m.arena.num_states;
  TeamStrategy ts;
  ts.choice.resize(k);
  for (int b = 0; b < k; ++b) {
    if (!m.blocks[b].exists) continue;
    ts.choice[b].assign(std::size_t(n) << m.shift[b], 0);
  }
  for (int s = 0; s < n; ++s)
    for (int b = 0; b < k; ++b) {
      if (!m.blocks[b].exists) continue;
      for (std::uint32_t packed = 0; packed < (std::uint32_t(1) << m.shift[b]); ++packed) {
        int id = s * g.per_state + g.stage_off[b] + int(packed);
        std::uint32_t action = 0;
        if (sol.winner[id] == 0 && sol.strategy[id] >= 0) {
          std::uint32_t next =
              std::uint32_t(sol.strategy[id] - s * g.per_state - g.stage_off[b + 1]);
          action = (next >> m.shift[b]) & m.mask[b];
        }
        ts.choice[b][(std::size_t(s) << m.shift[b]) + packed] = action;
      }
    }
  return ts;
}

}  // namespace bqltl
