#include "qcw/games.hpp"

#include <algorithm>

namespace qcw {
namespace {

// The four valid triples of a line with the given sign, in canonical order:
// the first two values run over (+,+), (-,+), (+,-), (-,-), the third is
// forced by the sign.
std::array<std::array<std::int8_t, 3>, 4> valid_triples(int sign) {
  std::array<std::array<std::int8_t, 3>, 4> t{};
  for (int k = 0; k < 4; ++k) {
    const int v0 = (k & 1) ? -1 : 1;
    const int v1 = (k & 2) ? -1 : 1;
    t[k] = {static_cast<std::int8_t>(v0), static_cast<std::int8_t>(v1),
            static_cast<std::int8_t>(sign * v0 * v1)};
  }
  return t;
}

std::uint8_t pos_in_line(const LineRecord& ln, std::uint16_t p) {
  for (std::uint8_t j = 0; j < 3; ++j)
    if (ln.points[j] == p) return j;
  throw internal_error("point not on line");
}

bool is_win(GameKind kind, const Question& q,
            const std::array<std::array<std::int8_t, 3>, 4>& answers) {
  if (kind == GameKind::llll) {
    int prod = 1;
    for (int t = 0; t < 4; ++t) prod *= answers[t][q.pos[t]];
    return prod == 1;
  }
  if (kind == GameKind::pl) {
    // the line player's answer slot for the (hidden) shared point
    return answers[0][0] == answers[1][q.pos[0]];
  }
  return answers[0][q.pos[0]] == answers[1][q.pos[1]];
}

void check_table(const IncidenceGeometry& g, const StrategyTable& t,
                 bool needs_lines, bool needs_points) {
  if (needs_lines) {
    if (t.line_answers.size() != g.line_count())
      throw config_error("strategy table covers " +
                         std::to_string(t.line_answers.size()) + " lines, " +
                         "geometry has " + std::to_string(g.line_count()));
    for (std::size_t l = 0; l < g.lines.size(); ++l) {
      const auto& a = t.line_answers[l];
      int prod = 1;
      for (const std::int8_t v : a) {
        if (v != 1 && v != -1)
          throw config_error("strategy table holds a non +/-1 answer");
        prod *= v;
      }
      if (prod != g.lines[l].sign)
        throw config_error("strategy table violates a line constraint");
    }
  }
  if (needs_points && t.point_answers.size() != g.point_count())
    throw config_error("strategy table lacks point answers");
}

}  // namespace

std::string to_string(GameKind k) {
  switch (k) {
    case GameKind::pl: return "pl";
    case GameKind::ll: return "ll";
    case GameKind::llll: return "llll";
  }
  throw internal_error("unknown game kind");
}

GameKind game_kind_from_string(std::string_view s) {
  if (s == "pl") return GameKind::pl;
  if (s == "ll") return GameKind::ll;
  if (s == "llll") return GameKind::llll;
  throw config_error("unknown game kind: \"" + std::string(s) + "\"");
}

int player_count(GameKind k) { return k == GameKind::llll ? 4 : 2; }

std::vector<Question> enumerate_questions(const IncidenceGeometry& g,
                                          GameKind kind) {
  const auto through = g.lines_through_points();
  std::vector<Question> qs;
  if (kind == GameKind::llll) {
    for (const auto& lns : through)
      if (lns.size() != 5)
        throw config_error(
            "llll needs exactly 5 lines through every point; geometry '" +
            g.name + "' does not qualify");
  }
  for (std::uint16_t p = 0; p < g.point_count(); ++p) {
    const auto& lns = through[p];
    switch (kind) {
      case GameKind::pl:
        for (const std::uint16_t l : lns) {
          Question q;
          q.point = p;
          q.lines[0] = l;
          q.n_lines = 1;
          q.pos[0] = pos_in_line(g.lines[l], p);
          qs.push_back(q);
        }
        break;
      case GameKind::ll:
        for (std::size_t i = 0; i < lns.size(); ++i)
          for (std::size_t j = i + 1; j < lns.size(); ++j) {
            Question q;
            q.point = p;
            q.lines[0] = lns[i];
            q.lines[1] = lns[j];
            q.n_lines = 2;
            q.pos[0] = pos_in_line(g.lines[lns[i]], p);
            q.pos[1] = pos_in_line(g.lines[lns[j]], p);
            qs.push_back(q);
          }
        break;
      case GameKind::llll:
        // 4-subsets of the 5 lines, lexicographic = omit index 4, 3, 2, 1, 0.
        for (int omit = 4; omit >= 0; --omit) {
          Question q;
          q.point = p;
          q.n_lines = 4;
          int slot = 0;
          for (int i = 0; i < 5; ++i) {
            if (i == omit) continue;
            q.lines[slot] = lns[i];
            q.pos[slot] = pos_in_line(g.lines[lns[i]], p);
            ++slot;
          }
          qs.push_back(q);
        }
        break;
    }
  }
  if (qs.empty())
    throw config_error("geometry '" + g.name + "' yields no " +
                       to_string(kind) + " questions");
  return qs;
}

namespace {

struct RoundOutcome {
  std::array<std::array<std::int8_t, 3>, 4> answers{};
  bool valid = true;
  bool win = false;
};

RoundOutcome quantum_round(const IncidenceGeometry& g, GameKind kind,
                           const Question& q, const NoiseParams& noise,
                           RngStream& rng) {
  const int players = player_count(kind);
  const int n = g.n_qubits;
  const int total = players * n;
  StateVector state = kind == GameKind::llll
                          ? StateVector::ghz_blocks(n, 4)
                          : StateVector::bell_pairs(n);
  RoundOutcome out;

  auto measure_one = [&](const PauliOperator& op, int player) {
    if (noise.p_depolarize > 0.0)
      state.depolarize(noise.p_depolarize, rng, player * n, n);
    int v = state.measure(embed(op, total, player * n), rng);
    if (noise.p_readout > 0.0 && rng.uniform() < noise.p_readout) v = -v;
    return v;
  };

  for (int t = 0; t < players; ++t) {
    if (kind == GameKind::pl && t == 0) {
      out.answers[0][0] =
          static_cast<std::int8_t>(measure_one(g.points[q.point], 0));
      continue;
    }
    const int line_slot = kind == GameKind::pl ? 0 : t;
    const LineRecord& ln = g.lines[q.lines[line_slot]];
    // Second party of a Bell-resource game corrects by the mirror sign;
    // the GHZ resource needs no correction.
    const bool mirror = players == 2 && t == 1;
    int prod = 1;
    for (int j = 0; j < 3; ++j) {
      const PauliOperator& op = g.points[ln.points[j]];
      int v = measure_one(op, t);
      if (mirror) v *= mirror_sign(op);
      out.answers[t][j] = static_cast<std::int8_t>(v);
      prod *= v;
    }
    if (prod != ln.sign) out.valid = false;
  }
  out.win = is_win(kind, q, out.answers);
  return out;
}

RoundOutcome classical_round(const IncidenceGeometry& g, GameKind kind,
                             const Question& q,
                             const std::vector<StrategyTable>& tables) {
  const int players = player_count(kind);
  RoundOutcome out;
  for (int t = 0; t < players; ++t) {
    const StrategyTable& tab =
        tables.size() == 1 ? tables[0] : tables[static_cast<std::size_t>(t)];
    if (kind == GameKind::pl && t == 0) {
      out.answers[0][0] = tab.point_answers[q.point];
      continue;
    }
    const int line_slot = kind == GameKind::pl ? 0 : t;
    out.answers[t] = tab.line_answers[q.lines[line_slot]];
  }
  out.win = is_win(kind, q, out.answers);
  return out;
}

Question swapped_question(const Question& q) {
  Question s = q;
  std::swap(s.lines[0], s.lines[1]);
  std::swap(s.pos[0], s.pos[1]);
  return s;
}

template <typename RoundFn>
GameResult run_rounds(const IncidenceGeometry& g, const GameConfig& cfg,
                      const std::vector<Question>& questions,
                      std::vector<TranscriptRow>* transcript, RoundFn&& fn) {
  // ll pairs are dealt in random order; exhaustively that means both orders.
  const bool deal_both = cfg.kind == GameKind::ll;
  GameResult res;
  res.kind = cfg.kind;
  res.geometry = g.name;
  res.exhaustive = cfg.exhaustive;
  res.seed = cfg.seed;
  res.rounds = cfg.exhaustive ? questions.size() * (deal_both ? 2 : 1)
                              : cfg.rounds;
  if (res.rounds == 0) throw config_error("round count must be positive");
  for (std::uint64_t r = 0; r < res.rounds; ++r) {
    RngStream rng(cfg.seed, r);
    std::uint32_t qi;
    bool swap = false;
    if (cfg.exhaustive) {
      qi = static_cast<std::uint32_t>(deal_both ? r / 2 : r);
      swap = deal_both && (r & 1);
    } else {
      qi = static_cast<std::uint32_t>(rng.below(questions.size()));
      if (deal_both) swap = rng.below(2) != 0;
    }
    const RoundOutcome out =
        fn(swap ? swapped_question(questions[qi]) : questions[qi], rng);
    res.wins += out.win;
    res.invalid_rounds += !out.valid;
    if (transcript)
      transcript->push_back({r, qi, swap, out.answers, out.valid, out.win});
  }
  res.rate = Rational(static_cast<std::int64_t>(res.wins),
                      static_cast<std::int64_t>(res.rounds));
  return res;
}

}  // namespace

GameResult play_quantum(const IncidenceGeometry& g, const GameConfig& cfg,
                        std::vector<TranscriptRow>* transcript) {
  cfg.noise.validate();
  const auto questions = enumerate_questions(g, cfg.kind);
  GameResult res = run_rounds(
      g, cfg, questions, transcript, [&](const Question& q, RngStream& rng) {
        return quantum_round(g, cfg.kind, q, cfg.noise, rng);
      });
  res.strategy = "quantum";
  return res;
}

GameResult play_classical(const IncidenceGeometry& g, const GameConfig& cfg,
                          const std::vector<StrategyTable>& tables,
                          std::vector<TranscriptRow>* transcript) {
  if (!cfg.noise.zero())
    throw config_error("classical strategies take no noise parameters");
  const int players = player_count(cfg.kind);
  if (tables.size() != 1 && tables.size() != static_cast<std::size_t>(players))
    throw config_error("need 1 shared or " + std::to_string(players) +
                       " per-player strategy tables");
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const bool point_player =
        cfg.kind == GameKind::pl && (t == 0 || tables.size() == 1);
    const bool line_player = !(cfg.kind == GameKind::pl && t == 0) ||
                             tables.size() == 1;
    check_table(g, tables[t], line_player, point_player);
  }
  const auto questions = enumerate_questions(g, cfg.kind);
  GameResult res = run_rounds(
      g, cfg, questions, transcript, [&](const Question& q, RngStream&) {
        return classical_round(g, cfg.kind, q, tables);
      });
  res.strategy = "classical";
  return res;
}

StrategyTable classical_from_assignment(const IncidenceGeometry& g,
                                        const Assignment& a) {
  if (a.n_points != g.point_count())
    throw dimension_error("assignment size does not match geometry");
  StrategyTable t;
  t.point_answers.reserve(g.point_count());
  for (std::uint32_t p = 0; p < g.point_count(); ++p)
    t.point_answers.push_back(static_cast<std::int8_t>(a.value(p)));
  t.line_answers.reserve(g.line_count());
  for (const auto& ln : g.lines) {
    std::array<std::int8_t, 3> v;
    int prod = 1;
    for (int j = 0; j < 3; ++j) {
      v[j] = static_cast<std::int8_t>(a.value(ln.points[j]));
      prod *= v[j];
    }
    // repair: the line's points are sorted, so index 2 is the highest point
    if (prod != ln.sign) v[2] = static_cast<std::int8_t>(-v[2]);
    t.line_answers.push_back(v);
  }
  return t;
}

namespace {

OptimalClassicalResult optimal_pl(const IncidenceGeometry& g) {
  const std::size_t P = g.point_count();
  const std::size_t L = g.line_count();
  if (P > 25)
    throw config_error("pl optimum intractable: 2^" + std::to_string(P) +
                       " point tables");
  // best[l][pat]: best match count over the line's 4 valid triples against
  // the assignment pattern (3 bits, bit j = point j of the line is -1).
  std::vector<std::array<std::int8_t, 8>> best(L);
  std::vector<std::array<std::int8_t, 8>> arg(L);
  std::vector<std::array<std::array<std::int8_t, 3>, 4>> tri(L);
  for (std::size_t l = 0; l < L; ++l) {
    tri[l] = valid_triples(g.lines[l].sign);
    for (int pat = 0; pat < 8; ++pat) {
      int b = -1, ba = 0;
      for (int k = 0; k < 4; ++k) {
        int score = 0;
        for (int j = 0; j < 3; ++j) {
          const int av = (pat >> j) & 1 ? -1 : 1;
          score += tri[l][k][j] == av;
        }
        if (score > b) {
          b = score;
          ba = k;
        }
      }
      best[l][pat] = static_cast<std::int8_t>(b);
      arg[l][pat] = static_cast<std::int8_t>(ba);
    }
  }
  std::uint64_t best_total = 0, best_a = 0;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << P); ++a) {
    std::uint64_t total = 0;
    for (std::size_t l = 0; l < L; ++l) {
      const auto& pts = g.lines[l].points;
      const int pat = static_cast<int>(((a >> pts[0]) & 1) |
                                       (((a >> pts[1]) & 1) << 1) |
                                       (((a >> pts[2]) & 1) << 2));
      total += static_cast<std::uint64_t>(best[l][pat]);
    }
    if (total > best_total) {
      best_total = total;
      best_a = a;
    }
  }
  OptimalClassicalResult res;
  res.value = Rational(static_cast<std::int64_t>(best_total),
                       static_cast<std::int64_t>(3 * L));
  res.exact = true;
  StrategyTable point_table, line_table;
  for (std::uint32_t p = 0; p < P; ++p)
    point_table.point_answers.push_back(
        static_cast<std::int8_t>((best_a >> p) & 1 ? -1 : 1));
  for (std::size_t l = 0; l < L; ++l) {
    const auto& pts = g.lines[l].points;
    const int pat = static_cast<int>(((best_a >> pts[0]) & 1) |
                                     (((best_a >> pts[1]) & 1) << 1) |
                                     (((best_a >> pts[2]) & 1) << 2));
    line_table.line_answers.push_back(tri[l][arg[l][pat]]);
  }
  res.strategies = {std::move(point_table), std::move(line_table)};
  return res;
}

// Exact ll optimum over team strategies: one shared table answers for both
// players, so the score of a table is dealing-independent and the search is
// a 4^L depth-first enumeration with branch-and-bound on intersection
// disagreements. Per-player tables diverging by role are deliberately outside
// the strategy space: they could exploit the dealing randomness and push past
// the published game values, which are team (NCHV-model) optima.
struct LLSearch {
  // one disagreement check between line `self` (the DFS depth) and an
  // already-placed line; weight 2 in ordered-pair mode
  struct Meet {
    std::uint16_t other;
    std::uint8_t pos_self, pos_other, weight;
  };
  std::size_t L;
  std::vector<std::array<std::array<std::int8_t, 3>, 4>> tri;
  std::vector<std::vector<Meet>> earlier;
  std::uint64_t n_questions = 0;
  long long bad = 0;
  long long best_bad = 0;
  std::vector<std::uint8_t> table, best_table;

  LLSearch(const IncidenceGeometry& g, bool ordered_pairs) {
    L = g.line_count();
    tri.resize(L);
    for (std::size_t l = 0; l < L; ++l) tri[l] = valid_triples(g.lines[l].sign);
    earlier.resize(L);
    if (ordered_pairs) {
      // explicit ordered dealing list: every check appears for both orders,
      // doubling numerator and denominator alike (the symmetry cross-check)
      const auto through = g.lines_through_points();
      for (std::uint16_t p = 0; p < g.point_count(); ++p)
        for (const std::uint16_t la : through[p])
          for (const std::uint16_t lb : through[p]) {
            if (la >= lb) continue;
            earlier[lb].push_back({la, pos_in_line(g.lines[lb], p),
                                   pos_in_line(g.lines[la], p), 2});
            n_questions += 2;
          }
    } else {
      const auto questions = enumerate_questions(g, GameKind::ll);
      for (const auto& q : questions) {
        earlier[q.lines[1]].push_back(
            {q.lines[0], q.pos[1], q.pos[0], 1});
      }
      n_questions = questions.size();
    }
    table.assign(L, 0);
  }

  // seed with an achievable table so pruning has a finite bound from depth 0
  void seed(const StrategyTable& t) {
    best_table.assign(L, 0);
    best_bad = 0;
    for (std::size_t l = 0; l < L; ++l) {
      for (int k = 0; k < 4; ++k)
        if (tri[l][k] == t.line_answers[l]) best_table[l] = static_cast<std::uint8_t>(k);
      for (const Meet& m : earlier[l])
        best_bad += m.weight *
                    (t.line_answers[l][m.pos_self] !=
                     t.line_answers[m.other][m.pos_other]);
    }
  }

  void dfs(std::size_t depth) {
    if (bad >= best_bad) return;
    if (depth == L) {
      best_bad = bad;
      best_table = table;
      return;
    }
    for (int k = 0; k < 4; ++k) {
      long long add = 0;
      for (const Meet& m : earlier[depth])
        add += m.weight * (tri[depth][k][m.pos_self] !=
                           tri[m.other][table[m.other]][m.pos_other]);
      table[depth] = static_cast<std::uint8_t>(k);
      bad += add;
      dfs(depth + 1);
      bad -= add;
    }
  }
};

OptimalClassicalResult optimal_ll(const IncidenceGeometry& g,
                                  bool ordered_pairs) {
  LLSearch search(g, ordered_pairs);
  Assignment plus(static_cast<std::uint32_t>(g.point_count()));
  search.seed(classical_from_assignment(g, plus));
  search.dfs(0);
  OptimalClassicalResult res;
  res.value = Rational(
      static_cast<std::int64_t>(search.n_questions) - search.best_bad,
      static_cast<std::int64_t>(search.n_questions));
  res.exact = true;
  StrategyTable shared;
  for (std::size_t l = 0; l < g.line_count(); ++l)
    shared.line_answers.push_back(search.tri[l][search.best_table[l]]);
  res.strategies = {shared, shared};
  return res;
}

OptimalClassicalResult reference_optimum(const IncidenceGeometry& g,
                                         GameKind kind, const char* why) {
  const std::size_t P = g.point_count(), L = g.line_count();
  Rational value;
  if (kind == GameKind::ll && P == 15 && L == 15)
    value = Rational(13, 15);
  else if (kind == GameKind::ll && P == 27 && L == 45)
    value = Rational(13, 15);
  else if (kind == GameKind::llll && P == 27 && L == 45)
    value = Rational(11, 15);
  else
    throw config_error(std::string("optimal classical value for ") +
                       to_string(kind) + " on '" + g.name + "' is " + why +
                       " and no reference value is known");
  OptimalClassicalResult res;
  res.value = value;
  res.exact = false;
  res.note = std::string("reference value; exact search ") + why;
  return res;
}

}  // namespace

OptimalClassicalResult optimal_classical(const IncidenceGeometry& g,
                                         GameKind kind, bool long_running,
                                         bool ordered_pairs) {
  if (ordered_pairs && kind != GameKind::ll)
    throw config_error("ordered question pairs only apply to the ll game");
  switch (kind) {
    case GameKind::pl:
      return optimal_pl(g);
    case GameKind::ll: {
      const std::size_t L = g.line_count();
      if (L <= 8 || (long_running && L <= 15))
        return optimal_ll(g, ordered_pairs);
      return reference_optimum(
          g, kind,
          long_running ? "intractable"
                       : "intractable at default settings (long-running "
                         "mode lifts the cap to 4^15 tables)");
    }
    case GameKind::llll:
      return reference_optimum(g, kind, "intractable");
  }
  throw internal_error("unknown game kind");
}

Rational random_strategy_search(const IncidenceGeometry& g, GameKind kind,
                                std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw config_error("sample count must be positive");
  const auto questions = enumerate_questions(g, kind);
  const std::size_t L = g.line_count();
  const std::size_t P = g.point_count();
  std::vector<std::array<std::array<std::int8_t, 3>, 4>> tri(L);
  for (std::size_t l = 0; l < L; ++l) tri[l] = valid_triples(g.lines[l].sign);

  std::uint64_t best = 0;
  // ll/llll sample one shared team table; pl samples a point table and an
  // independent line table (the roles differ, see optimal_classical)
  std::vector<std::uint8_t> ks(L, 0);
  std::vector<std::int8_t> pts(P, 1);
  for (std::uint64_t s = 0; s < samples; ++s) {
    RngStream rng(seed, s);
    if (kind == GameKind::pl)
      for (std::size_t p = 0; p < P; ++p) pts[p] = rng.next() & 1 ? -1 : 1;
    for (std::size_t l = 0; l < L; ++l)
      ks[l] = static_cast<std::uint8_t>(rng.below(4));
    std::uint64_t wins = 0;
    for (const auto& q : questions) {
      if (kind == GameKind::llll) {
        int prod = 1;
        for (int t = 0; t < 4; ++t)
          prod *= tri[q.lines[t]][ks[q.lines[t]]][q.pos[t]];
        wins += prod == 1;
      } else if (kind == GameKind::ll) {
        // a shared table scores both dealings alike; count the pair once
        wins += tri[q.lines[0]][ks[q.lines[0]]][q.pos[0]] ==
                tri[q.lines[1]][ks[q.lines[1]]][q.pos[1]];
      } else {
        wins += pts[q.point] == tri[q.lines[0]][ks[q.lines[0]]][q.pos[0]];
      }
    }
    if (wins > best) best = wins;
  }
  return Rational(static_cast<std::int64_t>(best),
                  static_cast<std::int64_t>(questions.size()));
}

}  // namespace qcw
