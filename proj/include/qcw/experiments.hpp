#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcw/degree.hpp"
#include "qcw/geometry.hpp"
#include "qcw/statevector.hpp"

namespace qcw {

struct ContextEstimate {
  std::uint32_t line_id = 0;
  std::uint64_t shots = 0;
  double mean_product = 0.0;  // in [-1, 1]
  double std_error = 0.0;     // sample std / sqrt(shots)
};

enum class BoundVerdict { violates_nchv, consistent_nchv, exceeds_qm };
std::string to_string(BoundVerdict v);

struct ChiReport {
  std::string geometry;
  double chi = 0.0;
  double chi_std_error = 0.0;
  int L = 0;
  int d = 0;
  std::string d_source;  // "exact" or "reference"
  double nchv_bound = 0.0;  // L - 2d
  double qm_bound = 0.0;    // L
  BoundVerdict verdict = BoundVerdict::consistent_nchv;
  double sigma = 0.0;  // significance of the NCHV comparison; inf if se = 0
};

struct HistogramData {
  std::string family;
  int L = 0;
  int d = 0;
  std::string d_source;
  double nchv_bound = 0.0;
  std::vector<double> chi_values;  // one per embedded subgeometry
  std::vector<double> bin_edges;   // n_bins + 1 edges over [L - 2d - 1, L]
  std::vector<std::uint64_t> counts;
  double min_chi = 0.0, max_chi = 0.0, mean_chi = 0.0;
  double violation_fraction = 0.0;  // fraction with chi > L - 2d
};

enum class InitialState { zeros, random };
InitialState initial_state_from_string(std::string_view s);

struct RioRun {
  std::vector<ContextEstimate> estimates;  // one per line, in line order
  ChiReport report;
};

// Estimate every context expectation with `shots` independent shots each
// (fresh copy of the input state per shot, RNG stream (seed, line, shot)),
// form chi = sum over positive lines of the mean minus sum over negative
// lines, and compare against the bounds. InitialState::random draws one Haar
// state from the seed and reuses it for every shot.
RioRun rio_negro_run(const IncidenceGeometry& g, std::uint64_t shots,
                     const NoiseParams& noise, InitialState state,
                     std::uint64_t seed);

// chi <= L - 2d is the noncontextual (NCHV) bound, chi <= L the quantum one.
// Throws internal_error if chi exceeds L by more than 5 standard errors.
ChiReport bound_check(const std::string& geometry, double chi, int L, int d,
                      const std::string& d_source, double std_error);

// Degree used in reports: exact (rank-reduced) when the incidence rank is
// small enough, else a known reference value; config_error otherwise.
struct DegreeInfo {
  int d = 0;
  std::string source;  // "exact" or "reference"
};
DegreeInfo resolve_degree(const IncidenceGeometry& g);

// A family of embedded subgeometries of one ambient space, each given by the
// ambient line ids it contains.
struct SubgeometryFamily {
  std::string family;  // squares | doilies | elliptic | hyperbolic
  int L = 0;
  DegreeInfo degree;
  std::vector<std::vector<std::uint32_t>> line_sets;
};

// Enumerate one of the four families inside a full symplectic space.
SubgeometryFamily collect_family(const IncidenceGeometry& ambient,
                                 const std::string& family);

// chi of every embedded subgeometry, summed from the full run's estimates
// (no re-measurement). The estimates must cover every ambient line.
HistogramData extract_subgeometry_chi(const IncidenceGeometry& ambient,
                                      const std::vector<ContextEstimate>& est,
                                      const SubgeometryFamily& family);

}  // namespace qcw
