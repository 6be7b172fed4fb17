#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "qcw/degree.hpp"
#include "qcw/games.hpp"
#include "qcw/geometry.hpp"

using namespace qcw;

namespace {

IncidenceGeometry elliptic() {
  return build_quadric({pauli_from_string("YYY")}, build_symplectic_space(3));
}

GameConfig exhaustive_cfg(GameKind k) {
  GameConfig cfg;
  cfg.kind = k;
  cfg.exhaustive = true;
  return cfg;
}

}  // namespace

TEST_CASE("game kind names and player counts") {
  for (const GameKind k : {GameKind::pl, GameKind::ll, GameKind::llll})
    CHECK(game_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(game_kind_from_string("lll"), config_error);
  CHECK(player_count(GameKind::pl) == 2);
  CHECK(player_count(GameKind::ll) == 2);
  CHECK(player_count(GameKind::llll) == 4);
}

TEST_CASE("question enumeration counts") {
  const IncidenceGeometry sq = build_mermin_square();
  const IncidenceGeometry doily = build_doily();
  const IncidenceGeometry e = elliptic();
  CHECK(enumerate_questions(sq, GameKind::pl).size() == 18);
  CHECK(enumerate_questions(sq, GameKind::ll).size() == 9);
  CHECK(enumerate_questions(doily, GameKind::pl).size() == 45);
  CHECK(enumerate_questions(doily, GameKind::ll).size() == 45);
  CHECK(enumerate_questions(e, GameKind::pl).size() == 135);
  CHECK(enumerate_questions(e, GameKind::ll).size() == 270);
  CHECK(enumerate_questions(e, GameKind::llll).size() == 135);
  CHECK_THROWS_AS(enumerate_questions(sq, GameKind::llll), config_error);
  CHECK_THROWS_AS(enumerate_questions(doily, GameKind::llll), config_error);
}

TEST_CASE("questions are internally consistent") {
  const IncidenceGeometry e = elliptic();
  for (const GameKind k : {GameKind::pl, GameKind::ll, GameKind::llll}) {
    for (const auto& q : enumerate_questions(e, k)) {
      CHECK(q.n_lines == (k == GameKind::pl ? 1 : k == GameKind::ll ? 2 : 4));
      std::set<std::uint16_t> distinct;
      for (int i = 0; i < q.n_lines; ++i) {
        const LineRecord& ln = e.lines[q.lines[i]];
        CHECK(ln.points[q.pos[i]] == q.point);
        distinct.insert(q.lines[i]);
        if (i > 0) CHECK(q.lines[i - 1] < q.lines[i]);  // canonical order
      }
      CHECK(distinct.size() == q.n_lines);
    }
  }
}

TEST_CASE("quantum strategies are perfect at zero noise") {
  struct Combo {
    IncidenceGeometry g;
    GameKind kind;
    std::uint64_t rounds;
  };
  const Combo combos[] = {
      {build_mermin_square(), GameKind::pl, 18},
      {build_doily(), GameKind::pl, 45},
      {build_mermin_square(), GameKind::ll, 18},  // 9 pairs x 2 dealings
      {build_doily(), GameKind::ll, 90},
      {elliptic(), GameKind::ll, 540},
      {elliptic(), GameKind::llll, 135},
  };
  for (const auto& combo : combos) {
    std::vector<TranscriptRow> transcript;
    const GameResult r =
        play_quantum(combo.g, exhaustive_cfg(combo.kind), &transcript);
    CHECK(r.rounds == combo.rounds);
    CHECK(r.wins == combo.rounds);
    CHECK(r.rate == Rational(1, 1));
    CHECK(r.invalid_rounds == 0);
    CHECK(r.strategy == "quantum");
    CHECK(r.geometry == combo.g.name);
    CHECK(r.exhaustive);
    REQUIRE(transcript.size() == combo.rounds);
    for (const auto& row : transcript) {
      CHECK(row.valid);
      CHECK(row.win);
    }
    if (combo.kind == GameKind::ll) {
      // both dealings of every pair, interleaved
      for (std::size_t i = 0; i < transcript.size(); ++i) {
        CHECK(transcript[i].question == i / 2);
        CHECK(transcript[i].swapped == (i % 2 == 1));
      }
    }
  }
}

TEST_CASE("exact classical optima match the published game values") {
  const IncidenceGeometry sq = build_mermin_square();
  const IncidenceGeometry doily = build_doily();

  const OptimalClassicalResult sq_ll = optimal_classical(sq, GameKind::ll);
  CHECK(sq_ll.value == Rational(8, 9));
  CHECK(sq_ll.exact);
  REQUIRE(sq_ll.strategies.size() == 2);
  CHECK(play_classical(sq, exhaustive_cfg(GameKind::ll), sq_ll.strategies).rate ==
        Rational(8, 9));

  const OptimalClassicalResult sq_pl = optimal_classical(sq, GameKind::pl);
  CHECK(sq_pl.value == Rational(17, 18));
  CHECK(sq_pl.exact);
  CHECK(play_classical(sq, exhaustive_cfg(GameKind::pl), sq_pl.strategies).rate ==
        Rational(17, 18));

  const OptimalClassicalResult d_pl = optimal_classical(doily, GameKind::pl);
  CHECK(d_pl.value == Rational(14, 15));
  CHECK(play_classical(doily, exhaustive_cfg(GameKind::pl), d_pl.strategies).rate ==
        Rational(14, 15));
}

TEST_CASE("ordered question pairs leave the ll optimum unchanged") {
  const IncidenceGeometry sq = build_mermin_square();
  CHECK(optimal_classical(sq, GameKind::ll, false, true).value ==
        Rational(8, 9));
  CHECK_THROWS_AS(optimal_classical(sq, GameKind::pl, false, true),
                  config_error);
}

TEST_CASE("doily ll: reference by default, exact 13/15 when long-running") {
  const IncidenceGeometry doily = build_doily();

  const OptimalClassicalResult ref = optimal_classical(doily, GameKind::ll);
  CHECK(ref.value == Rational(13, 15));
  CHECK_FALSE(ref.exact);
  CHECK(ref.note.find("long-running") != std::string::npos);
  CHECK(ref.strategies.empty());

  const OptimalClassicalResult exact =
      optimal_classical(doily, GameKind::ll, /*long_running=*/true);
  CHECK(exact.value == Rational(13, 15));
  CHECK(exact.exact);
  REQUIRE(exact.strategies.size() == 2);
  CHECK(play_classical(doily, exhaustive_cfg(GameKind::ll), exact.strategies)
            .rate == Rational(13, 15));
}

TEST_CASE("intractable games quote references or refuse") {
  const IncidenceGeometry e = elliptic();
  const OptimalClassicalResult ll = optimal_classical(e, GameKind::ll);
  CHECK(ll.value == Rational(13, 15));
  CHECK_FALSE(ll.exact);
  const OptimalClassicalResult llll = optimal_classical(e, GameKind::llll);
  CHECK(llll.value == Rational(11, 15));
  CHECK_FALSE(llll.exact);
  CHECK_FALSE(llll.note.empty());
  CHECK_THROWS_AS(optimal_classical(e, GameKind::pl), config_error);
  CHECK_THROWS_AS(optimal_classical(build_doily(), GameKind::llll),
                  config_error);
}

TEST_CASE("assignment-derived tables are always valid") {
  RngStream rng(55);
  for (const IncidenceGeometry& g : {build_doily(), elliptic()}) {
    for (int t = 0; t < 40; ++t) {
      Assignment a(static_cast<std::uint32_t>(g.point_count()));
      for (std::uint32_t p = 0; p < a.n_points; ++p)
        a.set_bit(p, rng.below(2) != 0);
      const StrategyTable tab = classical_from_assignment(g, a);
      REQUIRE(tab.line_answers.size() == g.line_count());
      for (std::size_t l = 0; l < g.line_count(); ++l) {
        const auto& v = tab.line_answers[l];
        CHECK(v[0] * v[1] * v[2] == g.lines[l].sign);
      }
      for (std::uint32_t p = 0; p < a.n_points; ++p)
        CHECK(tab.point_answers[p] == a.value(p));
    }
  }
  Assignment wrong(9);
  CHECK_THROWS_AS(classical_from_assignment(build_doily(), wrong),
                  dimension_error);
}

TEST_CASE("best assignments achieve the published values when played") {
  const IncidenceGeometry sq = build_mermin_square();
  const StrategyTable sq_tab = classical_from_assignment(sq, Assignment(9));
  CHECK(play_classical(sq, exhaustive_cfg(GameKind::ll), {sq_tab}).rate ==
        Rational(8, 9));

  const IncidenceGeometry doily = build_doily();
  const StrategyTable d_tab =
      classical_from_assignment(doily, exhaustive_degree(doily).witness);
  CHECK(play_classical(doily, exhaustive_cfg(GameKind::ll), {d_tab}).rate ==
        Rational(13, 15));
  CHECK(play_classical(doily, exhaustive_cfg(GameKind::pl), {d_tab}).rate ==
        Rational(14, 15));

  const IncidenceGeometry e = elliptic();
  const StrategyTable e_tab =
      classical_from_assignment(e, rank_reduced_degree(e).witness);
  CHECK(play_classical(e, exhaustive_cfg(GameKind::ll), {e_tab}).rate ==
        Rational(13, 15));
  CHECK(play_classical(e, exhaustive_cfg(GameKind::llll), {e_tab}).rate ==
        Rational(11, 15));
}

TEST_CASE("random strategy search stays at or below the published optima") {
  const IncidenceGeometry sq = build_mermin_square();
  const IncidenceGeometry doily = build_doily();
  const IncidenceGeometry e = elliptic();

  const Rational sq_ll = random_strategy_search(sq, GameKind::ll, 100000, 3);
  CHECK(sq_ll <= Rational(8, 9));
  CHECK(sq_ll == Rational(8, 9));  // tiny space; the optimum is hit

  CHECK(random_strategy_search(sq, GameKind::pl, 100000, 3) <=
        Rational(17, 18));
  CHECK(random_strategy_search(doily, GameKind::ll, 1000000, 5) <=
        Rational(13, 15));
  CHECK(random_strategy_search(e, GameKind::llll, 1000000, 5) <=
        Rational(11, 15));

  // deterministic per seed
  CHECK(random_strategy_search(doily, GameKind::ll, 20000, 9) ==
        random_strategy_search(doily, GameKind::ll, 20000, 9));
  CHECK_THROWS_AS(random_strategy_search(sq, GameKind::ll, 0, 1), config_error);
}

TEST_CASE("strategy table validation") {
  const IncidenceGeometry sq = build_mermin_square();
  const StrategyTable good = classical_from_assignment(sq, Assignment(9));

  CHECK_THROWS_AS(
      play_classical(sq, exhaustive_cfg(GameKind::ll), {good, good, good}),
      config_error);  // 2-player game, 3 tables

  StrategyTable short_tab = good;
  short_tab.line_answers.pop_back();
  CHECK_THROWS_AS(play_classical(sq, exhaustive_cfg(GameKind::ll), {short_tab}),
                  config_error);

  StrategyTable invalid = good;
  invalid.line_answers[0][0] = static_cast<std::int8_t>(-invalid.line_answers[0][0]);
  CHECK_THROWS_AS(play_classical(sq, exhaustive_cfg(GameKind::ll), {invalid}),
                  config_error);  // triple no longer multiplies to the sign

  StrategyTable junk = good;
  junk.line_answers[2][1] = 0;
  CHECK_THROWS_AS(play_classical(sq, exhaustive_cfg(GameKind::ll), {junk}),
                  config_error);

  StrategyTable no_points = good;
  no_points.point_answers.clear();
  CHECK_THROWS_AS(play_classical(sq, exhaustive_cfg(GameKind::pl), {no_points}),
                  config_error);

  GameConfig noisy = exhaustive_cfg(GameKind::ll);
  noisy.noise.p_readout = 0.1;
  CHECK_THROWS_AS(play_classical(sq, noisy, {good}), config_error);

  GameConfig zero_rounds;
  zero_rounds.kind = GameKind::ll;
  zero_rounds.rounds = 0;
  CHECK_THROWS_AS(play_classical(sq, zero_rounds, {good}), config_error);
}

TEST_CASE("full readout scrambling drives pl to a coin flip") {
  GameConfig cfg;
  cfg.kind = GameKind::pl;
  cfg.rounds = 20000;
  cfg.seed = 17;
  cfg.noise.p_readout = 0.5;
  const GameResult r = play_quantum(build_doily(), cfg);
  CHECK(r.rounds == 20000);
  CHECK(std::abs(r.rate.value() - 0.5) < 0.02);  // 5 sigma ~ 0.018
}

TEST_CASE("depolarization produces invalid answers and lost rounds") {
  GameConfig cfg;
  cfg.kind = GameKind::ll;
  cfg.rounds = 5000;
  cfg.seed = 23;
  cfg.noise.p_depolarize = 0.05;
  const GameResult r = play_quantum(build_mermin_square(), cfg);
  CHECK(r.invalid_rounds > 0);
  CHECK(r.wins < r.rounds);
  CHECK(r.rate.value() > 0.5);
}

TEST_CASE("sampled play is deterministic per seed") {
  GameConfig cfg;
  cfg.kind = GameKind::ll;
  cfg.rounds = 500;
  cfg.seed = 7;
  const IncidenceGeometry sq = build_mermin_square();
  std::vector<TranscriptRow> t1, t2, t3;
  const GameResult r1 = play_quantum(sq, cfg, &t1);
  const GameResult r2 = play_quantum(sq, cfg, &t2);
  CHECK(r1.wins == r2.wins);
  REQUIRE(t1.size() == t2.size());
  bool identical = true;
  for (std::size_t i = 0; i < t1.size(); ++i)
    identical = identical && t1[i].question == t2[i].question &&
                t1[i].swapped == t2[i].swapped && t1[i].answers == t2[i].answers;
  CHECK(identical);

  cfg.seed = 8;
  (void)play_quantum(sq, cfg, &t3);
  bool same_questions = true;
  for (std::size_t i = 0; i < t1.size(); ++i)
    same_questions = same_questions && t1[i].question == t3[i].question;
  CHECK_FALSE(same_questions);
}
