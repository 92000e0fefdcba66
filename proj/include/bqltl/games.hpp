// ============================================================================
// games.hpp — parity games and the round-based quantifier game
// ============================================================================
//
// Max-parity convention throughout: player Even wins a play iff the highest
// color seen infinitely often is even.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bqltl/formula.hpp"
#include "bqltl/word_automata.hpp"

namespace bqltl {

struct ParityGame {
  struct Pos {
    int owner = 0;  // 0 Even, 1 Odd
    int color = 0;
    std::vector<int> succ;  // nonempty: games are total
  };
  std::vector<Pos> pos;
};

struct GameSolution {
  std::vector<int> winner;    // per position, 0 or 1
  std::vector<int> strategy;  // winning successor at positions owned by the
                              // winner there; -1 elsewhere
};

GameSolution zielonka_solve(const ParityGame& g);

// Independent check that Even's positional strategy wins from every position
// in `region`: with Even's moves fixed, no reachable cycle may have an odd
// maximum color.
bool validate_even_strategy(const ParityGame& g, const std::vector<int>& strategy,
                            const std::vector<int>& region);

// --- the round-based game of a quantifier prefix ---------------------------

// One round fixes a letter of 2^alphabet_vars block by block in prefix order;
// existential blocks belong to Even, universal blocks to Odd.  The arena then
// advances deterministically and its parity condition decides the play.
struct MultiParityGame {
  Dpw arena;
  std::vector<QuantBlock> blocks;     // partition of arena.alphabet_vars
  std::vector<std::vector<int>> bit;  // bit[i][j] = alphabet bit of blocks[i].vars[j]
  std::vector<int> shift;             // packed-bit offset of block i
  std::vector<std::uint32_t> mask;    // local action mask of block i
};

MultiParityGame build_multi_game(const Dpw& d, const std::vector<QuantBlock>& prefix);

struct SeqGame {
  ParityGame game;
  int per_state = 0;             // positions per arena state
  std::vector<int> stage_off;    // offset of stage i within a state's slice
  int initial = 0;
  // position = state * per_state + stage_off[i] + packed bits of blocks < i
};

SeqGame sequentialize(const MultiParityGame& m);

// choice[b] is defined for existential blocks only:
// choice[b][state * (1 << shift[b]) + packed earlier bits] = local action.
struct TeamStrategy {
  std::vector<std::vector<std::uint32_t>> choice;
};

// Requires Even to win the initial position; returns nullopt otherwise.
std::optional<TeamStrategy> extract_team_strategy(const MultiParityGame& m,
                                                  const SeqGame& g,
                                                  const GameSolution& sol);

}  // namespace bqltl
