#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qcw/degree.hpp"
#include "qcw/geometry.hpp"
#include "qcw/statevector.hpp"

namespace qcw {

// pl: point player vs line player on an incident (point, line) pair.
// ll: two line players on a pair of distinct intersecting lines.
// llll: four line players on four distinct lines through a common point
//       (needs a 5-regular geometry such as an elliptic quadric).
enum class GameKind { pl, ll, llll };
std::string to_string(GameKind k);
GameKind game_kind_from_string(std::string_view s);
int player_count(GameKind k);

struct Question {
  std::uint16_t point = 0;               // the (hidden) intersection point
  std::array<std::uint16_t, 4> lines{};  // line ids dealt in canonical order
  std::uint8_t n_lines = 0;              // 1 (pl), 2 (ll), 4 (llll)
  std::array<std::uint8_t, 4> pos{};     // index of point within each line
};

// All questions under the uniform referee distribution, in deterministic
// order (ascending point, then ascending line ids). ll pairs are unordered
// and stored with the lower line id first; which player receives which line
// is decided at play time (see play_* below), because fixing a canonical
// dealing would let the players exploit it and beat the true game value.
std::vector<Question> enumerate_questions(const IncidenceGeometry& g,
                                          GameKind kind);

// Deterministic one-player table: a valid +/-1 triple per line (values
// ordered by the line's sorted points, product equal to the line sign), and
// a +/-1 value per point for the pl point player.
struct StrategyTable {
  std::vector<std::array<std::int8_t, 3>> line_answers;
  std::vector<std::int8_t> point_answers;
};

struct GameConfig {
  GameKind kind = GameKind::ll;
  std::uint64_t rounds = 10000;
  bool exhaustive = false;  // play every question once instead of sampling
  std::uint64_t seed = 1;
  NoiseParams noise;
};

struct GameResult {
  GameKind kind = GameKind::ll;
  std::string geometry;
  std::string strategy;
  std::uint64_t rounds = 0;
  std::uint64_t wins = 0;
  Rational rate;
  // Rounds where some player's triple violated its line constraint (possible
  // under noise; answers are reported as-is and the win predicate still
  // applies).
  std::uint64_t invalid_rounds = 0;
  bool exhaustive = false;
  std::uint64_t seed = 0;
};

struct TranscriptRow {
  std::uint64_t round = 0;
  std::uint32_t question = 0;  // index into enumerate_questions order
  bool swapped = false;        // ll only: stored line pair dealt in reverse
  std::array<std::array<std::int8_t, 3>, 4> answers{};  // per player values
  bool valid = false;
  bool win = false;
};

// Entangled strategy: Bell pairs for the two-player games (second player's
// outcomes corrected by mirror_sign), 4-party GHZ blocks for llll (no
// correction; the product win predicate holds directly). Wins every round at
// zero noise.
//
// ll dealing: the referee hands the two lines of an unordered pair to the
// players in a uniformly random order. Sampled play draws the order per
// round; exhaustive play runs every question under both orders (rounds =
// 2 x questions). pl roles are fixed and the llll win predicate is
// symmetric, so only ll needs this.
GameResult play_quantum(const IncidenceGeometry& g, const GameConfig& cfg,
                        std::vector<TranscriptRow>* transcript = nullptr);

// Deterministic tables, one per player (or a single shared table). Same ll
// dealing rules as play_quantum.
GameResult play_classical(const IncidenceGeometry& g, const GameConfig& cfg,
                          const std::vector<StrategyTable>& tables,
                          std::vector<TranscriptRow>* transcript = nullptr);

// Triples read off the assignment; a violated line is repaired by flipping
// the value of its highest-indexed point.
StrategyTable classical_from_assignment(const IncidenceGeometry& g,
                                        const Assignment& a);

struct OptimalClassicalResult {
  Rational value;
  bool exact = false;  // false when quoting a reference bound instead
  std::string note;
  std::vector<StrategyTable> strategies;  // one per player when exact
};

// Exact optimal team value, when tractable:
//   pl: 2^P point tables (P <= 25) with exact per-line best responses for
//       the line player (a line's triple only affects questions naming it);
//   ll: 4^L shared tables (L <= 8, or any L <= 15 with long_running),
//       branch-and-bound on intersection disagreements.
// The ll/llll classical strategy space is one table answered by every
// player (a deterministic NCHV model). Role-dependent tables could exploit
// the random dealing order and are not part of the game. Intractable cases
// fall back to known reference values (ll doily and ll/llll elliptic
// quadric) or fail with config_error. ordered_pairs scores an explicitly
// ordered question list instead of unordered pairs; the value must not
// change (symmetry check).
OptimalClassicalResult optimal_classical(const IncidenceGeometry& g,
                                         GameKind kind,
                                         bool long_running = false,
                                         bool ordered_pairs = false);

// Best exact win rate over `samples` uniformly random valid strategies:
// a shared team table for ll/llll, a (point table, line table) pair for pl.
Rational random_strategy_search(const IncidenceGeometry& g, GameKind kind,
                                std::uint64_t samples, std::uint64_t seed);

}  // namespace qcw
