#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcw/geometry.hpp"

namespace qcw {

// A +/-1 valuation of the points of a geometry, packed one bit per point
// (bit set means the point is assigned -1).
struct Assignment {
  std::vector<std::uint64_t> words;
  std::uint32_t n_points = 0;

  Assignment() = default;
  explicit Assignment(std::uint32_t n) : words((n + 63) / 64, 0), n_points(n) {}

  bool bit(std::uint32_t i) const { return (words[i >> 6] >> (i & 63)) & 1u; }
  int value(std::uint32_t i) const { return bit(i) ? -1 : 1; }
  void set_bit(std::uint32_t i, bool v) {
    const std::uint64_t m = 1ULL << (i & 63);
    if (v)
      words[i >> 6] |= m;
    else
      words[i >> 6] &= ~m;
  }
  void flip(std::uint32_t i) { words[i >> 6] ^= 1ULL << (i & 63); }

  // Fixed-width big-endian hex of the bit string (bit 0 = least significant).
  std::string to_hex() const;
  static Assignment from_hex(std::string_view hex, std::uint32_t n_points);

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

enum class DegreeMethod { exhaustive, rank_reduced, heuristic };
std::string to_string(DegreeMethod m);
DegreeMethod degree_method_from_string(std::string_view s);

struct SolverConfig {
  DegreeMethod method = DegreeMethod::exhaustive;
  // Exact solvers refuse when they would enumerate more than 2^point_cap
  // assignments, unless long_running lifts the cap.
  int point_cap = 30;
  // Heuristic: total flip proposals, split into budget/10000 restarts.
  std::uint64_t budget = 100000;
  std::uint64_t seed = 1;
  bool long_running = false;
};

struct DegreeResult {
  int degree = 0;
  bool exact = true;
  DegreeMethod method = DegreeMethod::exhaustive;
  Assignment witness;
  std::vector<std::uint32_t> unsatisfied;  // line ids violated by the witness
};

// A line is satisfied when the product of its three point values equals its
// sign. Returns how many lines the assignment violates.
int unsatisfied_count(const IncidenceGeometry& g, const Assignment& a);
std::vector<std::uint32_t> unsatisfied_lines(const IncidenceGeometry& g,
                                             const Assignment& a);

// Exact minimum over all 2^P assignments, Gray-code enumeration. Ties break
// to the first witness in enumeration order (all-+1 is step 0).
DegreeResult exhaustive_degree(const IncidenceGeometry& g,
                               const SolverConfig& cfg = {});

// Exact minimum over the 2^rank coset of the GF(2) column space of the
// point-line incidence matrix; equivalent to exhaustive but enumerates only
// pivot-point subsets.
DegreeResult rank_reduced_degree(const IncidenceGeometry& g,
                                 const SolverConfig& cfg = {});

// Best-found upper bound: restarted simulated annealing over single point
// flips, cfg.budget proposals in total. Deterministic for a fixed seed.
DegreeResult heuristic_degree(const IncidenceGeometry& g,
                              const SolverConfig& cfg = {});

DegreeResult compute_degree(const IncidenceGeometry& g,
                            const SolverConfig& cfg);

// GF(2) rank of the point-line incidence matrix (feasibility probe for
// rank_reduced).
int incidence_rank(const IncidenceGeometry& g);

// Shape check for a heuristic witness on W(5,2): 63 unsatisfied lines that
// cover all 63 points with every point on exactly three of them (the split
// Cayley hexagon profile).
struct HexagonReport {
  std::size_t n_lines = 0;
  bool line_count_ok = false;
  bool covers_all_points = false;
  bool three_regular = false;
  bool pass() const {
    return line_count_ok && covers_all_points && three_regular;
  }
};
HexagonReport verify_hexagon_shape(const IncidenceGeometry& g,
                                   const std::vector<std::uint32_t>& line_ids);

}  // namespace qcw
