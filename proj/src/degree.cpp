#include "qcw/degree.hpp"

#include <algorithm>
#include <cmath>

#include "qcw/kernels.hpp"
#include "qcw/rng.hpp"

namespace qcw {
namespace {

// Point-line incidence as bit rows: masks[p] marks the lines through point p,
// v0 marks the negative lines. The violation vector of an assignment is
// v0 xor (masks of all -1 points); its popcount is the unsatisfied count.
struct LineSystem {
  std::size_t nw;
  std::vector<std::uint64_t> masks;  // point_count x nw
  std::vector<std::uint64_t> v0;
  std::vector<std::uint64_t> mask_pop;  // lines through each point

  explicit LineSystem(const IncidenceGeometry& g)
      : nw((g.line_count() + 63) / 64),
        masks(g.point_count() * nw, 0),
        v0(nw, 0),
        mask_pop(g.point_count(), 0) {
    for (std::size_t l = 0; l < g.lines.size(); ++l) {
      const std::uint64_t bit = 1ULL << (l & 63);
      for (const std::uint16_t p : g.lines[l].points)
        masks[p * nw + (l >> 6)] |= bit;
      if (g.lines[l].sign < 0) v0[l >> 6] |= bit;
    }
    const auto& K = kern::active();
    for (std::size_t p = 0; p < g.point_count(); ++p)
      mask_pop[p] = K.popcount(mask(p), nw);
  }

  const std::uint64_t* mask(std::size_t p) const { return &masks[p * nw]; }

  std::vector<std::uint64_t> violation(const Assignment& a) const {
    std::vector<std::uint64_t> v = v0;
    const auto& K = kern::active();
    for (std::uint32_t p = 0; p < a.n_points; ++p)
      if (a.bit(p)) K.xor_popcount(v.data(), mask(p), nw);
    return v;
  }
};

Assignment assignment_from_gray(std::uint64_t step,
                                const std::vector<std::uint32_t>& bit_points,
                                std::uint32_t n_points) {
  Assignment a(n_points);
  const std::uint64_t gray = step ^ (step >> 1);
  for (std::size_t b = 0; b < bit_points.size(); ++b)
    if ((gray >> b) & 1u) a.set_bit(bit_points[b], true);
  return a;
}

// Gray-code walk over subsets of bit_points; returns (best count, best step).
// First minimum in enumeration order wins, and step 0 is the all-+1 start.
std::pair<std::uint64_t, std::uint64_t> gray_minimize(
    const LineSystem& sys, const std::vector<std::uint32_t>& bit_points,
    std::vector<std::uint64_t> v) {
  const auto& K = kern::active();
  const std::size_t nw = sys.nw;
  std::uint64_t best = K.popcount(v.data(), nw);
  std::uint64_t best_step = 0;
  const std::uint64_t total = 1ULL << bit_points.size();
  for (std::uint64_t t = 1; t < total && best > 0; ++t) {
    const int b = __builtin_ctzll(t);
    const std::uint64_t c =
        K.xor_popcount(v.data(), sys.mask(bit_points[b]), nw);
    if (c < best) {
      best = c;
      best_step = t;
    }
  }
  return {best, best_step};
}

void check_enumeration_size(std::size_t n_bits, const SolverConfig& cfg,
                            const char* solver) {
  if (n_bits > 63)
    throw config_error(std::string(solver) + ": 2^" + std::to_string(n_bits) +
                       " assignments cannot be enumerated");
  if (!cfg.long_running && n_bits > static_cast<std::size_t>(cfg.point_cap))
    throw config_error(std::string(solver) + ": 2^" + std::to_string(n_bits) +
                       " assignments exceeds the 2^" +
                       std::to_string(cfg.point_cap) +
                       " cap; use the heuristic method or long_running");
}

DegreeResult finish(const IncidenceGeometry& g, DegreeMethod method,
                    bool exact, Assignment witness) {
  DegreeResult r;
  r.method = method;
  r.exact = exact;
  r.witness = std::move(witness);
  r.unsatisfied = unsatisfied_lines(g, r.witness);
  r.degree = static_cast<int>(r.unsatisfied.size());
  return r;
}

}  // namespace

std::string Assignment::to_hex() const {
  const std::size_t nibbles = (n_points + 3) / 4;
  std::string s(nibbles, '0');
  static constexpr char digits[] = "0123456789abcdef";
  for (std::size_t i = 0; i < nibbles; ++i) {
    const std::size_t lo = i * 4;
    unsigned v = 0;
    for (unsigned b = 0; b < 4 && lo + b < n_points; ++b)
      v |= static_cast<unsigned>(bit(static_cast<std::uint32_t>(lo + b))) << b;
    s[nibbles - 1 - i] = digits[v];
  }
  return s;
}

Assignment Assignment::from_hex(std::string_view hex, std::uint32_t n_points) {
  const std::size_t nibbles = (n_points + 3) / 4;
  if (hex.size() != nibbles)
    throw config_error("witness hex must have " + std::to_string(nibbles) +
                       " digits for " + std::to_string(n_points) + " points");
  Assignment a(n_points);
  for (std::size_t i = 0; i < nibbles; ++i) {
    const char c = hex[nibbles - 1 - i];
    unsigned v;
    if (c >= '0' && c <= '9')
      v = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f')
      v = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F')
      v = static_cast<unsigned>(c - 'A' + 10);
    else
      throw config_error("bad hex digit in witness");
    for (unsigned b = 0; b < 4; ++b) {
      const std::size_t idx = i * 4 + b;
      if ((v >> b) & 1u) {
        if (idx >= n_points)
          throw config_error("witness hex sets a bit beyond the point count");
        a.set_bit(static_cast<std::uint32_t>(idx), true);
      }
    }
  }
  return a;
}

std::string to_string(DegreeMethod m) {
  switch (m) {
    case DegreeMethod::exhaustive: return "exhaustive";
    case DegreeMethod::rank_reduced: return "rank_reduced";
    case DegreeMethod::heuristic: return "heuristic";
  }
  throw internal_error("unknown degree method");
}

DegreeMethod degree_method_from_string(std::string_view s) {
  if (s == "exhaustive") return DegreeMethod::exhaustive;
  if (s == "rank_reduced") return DegreeMethod::rank_reduced;
  if (s == "heuristic") return DegreeMethod::heuristic;
  throw config_error("unknown degree method: \"" + std::string(s) + "\"");
}

int unsatisfied_count(const IncidenceGeometry& g, const Assignment& a) {
  return static_cast<int>(unsatisfied_lines(g, a).size());
}

std::vector<std::uint32_t> unsatisfied_lines(const IncidenceGeometry& g,
                                             const Assignment& a) {
  if (a.n_points != g.point_count())
    throw dimension_error("assignment size does not match geometry");
  std::vector<std::uint32_t> out;
  for (std::size_t l = 0; l < g.lines.size(); ++l) {
    const auto& ln = g.lines[l];
    const int prod = a.value(ln.points[0]) * a.value(ln.points[1]) *
                     a.value(ln.points[2]);
    if (prod != ln.sign) out.push_back(static_cast<std::uint32_t>(l));
  }
  return out;
}

DegreeResult exhaustive_degree(const IncidenceGeometry& g,
                               const SolverConfig& cfg) {
  check_enumeration_size(g.point_count(), cfg, "exhaustive");
  const LineSystem sys(g);
  std::vector<std::uint32_t> bits(g.point_count());
  for (std::uint32_t p = 0; p < bits.size(); ++p) bits[p] = p;
  const auto [best, step] = gray_minimize(sys, bits, sys.v0);
  (void)best;
  return finish(g, DegreeMethod::exhaustive, true,
                assignment_from_gray(step, bits,
                                     static_cast<std::uint32_t>(g.point_count())));
}

namespace {

// GF(2) elimination over point columns; returns the pivot point indices
// (ascending, since columns are visited in point order).
std::vector<std::uint32_t> pivot_points(const LineSystem& sys,
                                        std::size_t n_points) {
  struct BasisVec {
    std::vector<std::uint64_t> v;
    int lead;
  };
  std::vector<BasisVec> basis;
  std::vector<std::uint32_t> pivots;
  const std::size_t nw = sys.nw;
  auto highest_bit = [nw](const std::vector<std::uint64_t>& v) {
    for (std::size_t w = nw; w-- > 0;)
      if (v[w]) return static_cast<int>(w * 64 + 63 - __builtin_clzll(v[w]));
    return -1;
  };
  for (std::uint32_t p = 0; p < n_points; ++p) {
    std::vector<std::uint64_t> col(sys.mask(p), sys.mask(p) + nw);
    for (const auto& b : basis)
      if ((col[b.lead >> 6] >> (b.lead & 63)) & 1u)
        for (std::size_t w = 0; w < nw; ++w) col[w] ^= b.v[w];
    const int lead = highest_bit(col);
    if (lead < 0) continue;
    basis.push_back({std::move(col), lead});
    pivots.push_back(p);
  }
  return pivots;
}

}  // namespace

int incidence_rank(const IncidenceGeometry& g) {
  const LineSystem sys(g);
  return static_cast<int>(pivot_points(sys, g.point_count()).size());
}

DegreeResult rank_reduced_degree(const IncidenceGeometry& g,
                                 const SolverConfig& cfg) {
  const LineSystem sys(g);
  const std::vector<std::uint32_t> pivots = pivot_points(sys, g.point_count());
  check_enumeration_size(pivots.size(), cfg, "rank_reduced");
  const auto [best, step] = gray_minimize(sys, pivots, sys.v0);
  (void)best;
  return finish(g, DegreeMethod::rank_reduced, true,
                assignment_from_gray(step, pivots,
                                     static_cast<std::uint32_t>(g.point_count())));
}

DegreeResult heuristic_degree(const IncidenceGeometry& g,
                              const SolverConfig& cfg) {
  if (cfg.budget == 0) throw config_error("heuristic: budget must be positive");
  const LineSystem sys(g);
  const auto& K = kern::active();
  const std::size_t nw = sys.nw;
  const std::uint32_t n_points = static_cast<std::uint32_t>(g.point_count());

  const std::uint64_t restarts = std::max<std::uint64_t>(1, cfg.budget / 10000);
  const std::uint64_t iters = std::max<std::uint64_t>(1, cfg.budget / restarts);
  constexpr double t_hi = 3.0, t_lo = 0.05;

  std::uint64_t best = ~0ULL;
  Assignment best_assignment(n_points);

  for (std::uint64_t r = 0; r < restarts && best > 0; ++r) {
    RngStream rng(cfg.seed, r);
    Assignment cur(n_points);
    for (std::uint32_t p = 0; p < n_points; ++p)
      cur.set_bit(p, rng.next() & 1u);
    std::vector<std::uint64_t> v = sys.violation(cur);
    std::uint64_t cost = K.popcount(v.data(), nw);
    if (cost < best) {
      best = cost;
      best_assignment = cur;
    }
    for (std::uint64_t it = 0; it < iters && cost > 0; ++it) {
      const double frac =
          iters > 1 ? static_cast<double>(it) / static_cast<double>(iters - 1)
                    : 1.0;
      const double temp = t_hi * std::pow(t_lo / t_hi, frac);
      const std::uint32_t p = static_cast<std::uint32_t>(rng.below(n_points));
      const std::int64_t delta =
          static_cast<std::int64_t>(sys.mask_pop[p]) -
          2 * static_cast<std::int64_t>(K.and_popcount(v.data(), sys.mask(p), nw));
      if (delta > 0 &&
          rng.uniform() >= std::exp(-static_cast<double>(delta) / temp))
        continue;
      cost = K.xor_popcount(v.data(), sys.mask(p), nw);
      cur.flip(p);
      if (cost < best) {
        best = cost;
        best_assignment = cur;
      }
    }
  }
  return finish(g, DegreeMethod::heuristic, false, std::move(best_assignment));
}

DegreeResult compute_degree(const IncidenceGeometry& g,
                            const SolverConfig& cfg) {
  switch (cfg.method) {
    case DegreeMethod::exhaustive: return exhaustive_degree(g, cfg);
    case DegreeMethod::rank_reduced: return rank_reduced_degree(g, cfg);
    case DegreeMethod::heuristic: return heuristic_degree(g, cfg);
  }
  throw internal_error("unknown degree method");
}

HexagonReport verify_hexagon_shape(const IncidenceGeometry& g,
                                   const std::vector<std::uint32_t>& line_ids) {
  HexagonReport rep;
  rep.n_lines = line_ids.size();
  rep.line_count_ok = line_ids.size() == 63;
  std::vector<int> cover(g.point_count(), 0);
  for (const std::uint32_t l : line_ids) {
    if (l >= g.line_count()) throw config_error("line id out of range");
    for (const std::uint16_t p : g.lines[l].points) ++cover[p];
  }
  rep.covers_all_points = true;
  rep.three_regular = true;
  for (const int c : cover) {
    if (c == 0) rep.covers_all_points = false;
    if (c != 3) rep.three_regular = false;
  }
  return rep;
}

}  // namespace qcw
