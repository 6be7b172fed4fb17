#include "qcw/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcw {
namespace {

constexpr std::uint64_t state_stream = 0x517a7e;  // input-state draw
constexpr int histogram_bins = 24;

struct BuiltinDegree {
  std::size_t points, lines;
  int d;
};

// Reference degrees for the standard geometries, used when exact computation
// is out of reach in-session (only W(5,2) and the hyperbolic quadric here).
constexpr BuiltinDegree builtin_degrees[] = {
    {9, 6, 1},     // Mermin square
    {15, 15, 3},   // doily
    {27, 45, 9},   // elliptic quadric in W(5,2)
    {35, 105, 21}, // hyperbolic quadric in W(5,2)
    {63, 315, 63}, // W(5,2)
};

}  // namespace

std::string to_string(BoundVerdict v) {
  switch (v) {
    case BoundVerdict::violates_nchv: return "violates_nchv";
    case BoundVerdict::consistent_nchv: return "consistent_nchv";
    case BoundVerdict::exceeds_qm: return "exceeds_qm";
  }
  throw internal_error("unknown verdict");
}

InitialState initial_state_from_string(std::string_view s) {
  if (s == "zeros") return InitialState::zeros;
  if (s == "random") return InitialState::random;
  throw config_error("initial state must be zeros or random, got \"" +
                     std::string(s) + "\"");
}

DegreeInfo resolve_degree(const IncidenceGeometry& g) {
  if (incidence_rank(g) <= 24) {
    SolverConfig cfg;
    cfg.point_cap = 24;
    return {rank_reduced_degree(g, cfg).degree, "exact"};
  }
  for (const auto& b : builtin_degrees)
    if (b.points == g.point_count() && b.lines == g.line_count())
      return {b.d, "reference"};
  throw config_error("degree of geometry '" + g.name +
                     "' is not computable in-session and has no reference "
                     "value; run the degree solver separately");
}

ChiReport bound_check(const std::string& geometry, double chi, int L, int d,
                      const std::string& d_source, double std_error) {
  ChiReport r;
  r.geometry = geometry;
  r.chi = chi;
  r.chi_std_error = std_error;
  r.L = L;
  r.d = d;
  r.d_source = d_source;
  r.nchv_bound = static_cast<double>(L - 2 * d);
  r.qm_bound = static_cast<double>(L);
  if (chi > r.qm_bound + 5.0 * std_error)
    throw internal_error("chi = " + std::to_string(chi) +
                         " exceeds the quantum bound " +
                         std::to_string(r.qm_bound) +
                         " by more than 5 standard errors");
  if (chi > r.qm_bound) {
    r.verdict = BoundVerdict::exceeds_qm;
    r.sigma = std_error > 0.0 ? (chi - r.qm_bound) / std_error : 0.0;
  } else if (chi > r.nchv_bound) {
    r.verdict = BoundVerdict::violates_nchv;
    r.sigma = std_error > 0.0 ? (chi - r.nchv_bound) / std_error
                              : std::numeric_limits<double>::infinity();
  } else {
    r.verdict = BoundVerdict::consistent_nchv;
    r.sigma = std_error > 0.0 ? (r.nchv_bound - chi) / std_error
                              : std::numeric_limits<double>::infinity();
  }
  return r;
}

RioRun rio_negro_run(const IncidenceGeometry& g, std::uint64_t shots,
                     const NoiseParams& noise, InitialState state,
                     std::uint64_t seed) {
  if (shots < 1) throw config_error("shots must be >= 1");
  noise.validate();

  StateVector base = StateVector::zeros(g.n_qubits);
  if (state == InitialState::random) {
    RngStream rng(seed, state_stream);
    base = StateVector::haar_random(g.n_qubits, rng);
  }

  RioRun run;
  run.estimates.reserve(g.line_count());
  double chi = 0.0, var_sum = 0.0;
  for (std::uint32_t l = 0; l < g.line_count(); ++l) {
    const auto& ln = g.lines[l];
    const std::array<PauliOperator, 3> ops = {g.points[ln.points[0]],
                                              g.points[ln.points[1]],
                                              g.points[ln.points[2]]};
    std::int64_t sum = 0;
    for (std::uint64_t s = 0; s < shots; ++s) {
      StateVector copy = base;
      RngStream rng(seed, l, s);
      const auto recs = measure_context(copy, ops, noise, rng);
      sum += recs[0].outcome * recs[1].outcome * recs[2].outcome;
    }
    ContextEstimate est;
    est.line_id = l;
    est.shots = shots;
    est.mean_product = static_cast<double>(sum) / static_cast<double>(shots);
    const double n = static_cast<double>(shots);
    const double var =
        shots > 1 ? n * (1.0 - est.mean_product * est.mean_product) / (n - 1.0)
                  : 0.0;
    est.std_error = std::sqrt(std::max(0.0, var) / n);
    chi += (ln.sign > 0 ? 1.0 : -1.0) * est.mean_product;
    var_sum += est.std_error * est.std_error;
    run.estimates.push_back(est);
  }

  const DegreeInfo deg = resolve_degree(g);
  run.report = bound_check(g.name, chi, static_cast<int>(g.line_count()),
                           deg.d, deg.source, std::sqrt(var_sum));
  return run;
}

namespace {

DegreeInfo member_degree(const IncidenceGeometry& ambient,
                         const std::vector<std::uint16_t>& member_points,
                         const std::vector<std::uint32_t>& member_lines,
                         const std::string& family) {
  IncidenceGeometry sub;
  sub.name = family + "_member";
  sub.n_qubits = ambient.n_qubits;
  std::vector<int> remap(ambient.point_count(), -1);
  for (const std::uint16_t p : member_points) {
    remap[p] = static_cast<int>(sub.points.size());
    sub.points.push_back(ambient.points[p]);
  }
  for (const std::uint32_t l : member_lines) {
    const auto& ln = ambient.lines[l];
    LineRecord rec;
    for (int j = 0; j < 3; ++j)
      rec.points[j] = static_cast<std::uint16_t>(remap[ln.points[j]]);
    rec.sign = ln.sign;
    sub.lines.push_back(rec);
  }
  return resolve_degree(sub);
}

}  // namespace

SubgeometryFamily collect_family(const IncidenceGeometry& ambient,
                                 const std::string& family) {
  SubgeometryFamily fam;
  fam.family = family;
  if (family == "squares" || family == "doilies") {
    const IncidenceGeometry model =
        family == "squares" ? build_mermin_square() : build_doily();
    const auto copies = enumerate_subgeometries(ambient, model);
    if (copies.empty())
      throw config_error("no embedded " + family + " found in '" +
                         ambient.name + "'");
    fam.L = static_cast<int>(model.line_count());
    for (const auto& pts : copies)
      fam.line_sets.push_back(induced_line_ids(ambient, pts));
    // the induced line count equals the model's by construction
    fam.degree = member_degree(
        ambient, copies.front(), fam.line_sets.front(), family);
    return fam;
  }
  if (family == "elliptic" || family == "hyperbolic") {
    const QuadricKind want = family == "elliptic" ? QuadricKind::elliptic
                                                  : QuadricKind::hyperbolic;
    std::vector<std::uint16_t> member_pts;
    for (const auto& q : enumerate_quadrics(ambient)) {
      const QuadricKind kind = q.name[0] == 'E' ? QuadricKind::elliptic
                                                : QuadricKind::hyperbolic;
      if (kind != want) continue;
      std::vector<std::uint16_t> pts;
      pts.reserve(q.point_count());
      for (const auto& p : q.points) {
        const int idx = ambient.index_of(point_id(p));
        if (idx < 0) throw internal_error("quadric point missing from ambient");
        pts.push_back(static_cast<std::uint16_t>(idx));
      }
      if (fam.line_sets.empty()) {
        fam.L = static_cast<int>(q.line_count());
        member_pts = pts;
      }
      fam.line_sets.push_back(induced_line_ids(ambient, pts));
    }
    if (fam.line_sets.empty())
      throw config_error("no " + family + " quadrics in '" + ambient.name +
                         "'");
    fam.degree =
        member_degree(ambient, member_pts, fam.line_sets.front(), family);
    return fam;
  }
  throw config_error(
      "unknown subgeometry family \"" + family +
      "\" (expected squares, doilies, elliptic or hyperbolic)");
}

HistogramData extract_subgeometry_chi(const IncidenceGeometry& ambient,
                                      const std::vector<ContextEstimate>& est,
                                      const SubgeometryFamily& family) {
  if (est.size() != ambient.line_count())
    throw config_error("full run covers " + std::to_string(est.size()) +
                       " contexts but the ambient space has " +
                       std::to_string(ambient.line_count()));
  std::vector<double> mean(ambient.line_count());
  std::vector<char> seen(ambient.line_count(), 0);
  for (const auto& e : est) {
    if (e.line_id >= ambient.line_count() || seen[e.line_id])
      throw config_error("full run estimates do not match the ambient lines");
    seen[e.line_id] = 1;
    mean[e.line_id] = e.mean_product;
  }

  HistogramData h;
  h.family = family.family;
  h.L = family.L;
  h.d = family.degree.d;
  h.d_source = family.degree.source;
  h.nchv_bound = static_cast<double>(family.L - 2 * family.degree.d);

  double sum = 0.0;
  std::uint64_t violations = 0;
  for (const auto& line_set : family.line_sets) {
    if (static_cast<int>(line_set.size()) != family.L)
      throw config_error("subgeometry line set size mismatch");
    double chi = 0.0;
    for (const std::uint32_t l : line_set) {
      if (l >= ambient.line_count())
        throw config_error("subgeometry line not present in the full run");
      chi += (ambient.lines[l].sign > 0 ? 1.0 : -1.0) * mean[l];
    }
    h.chi_values.push_back(chi);
    sum += chi;
    violations += chi > h.nchv_bound;
  }
  h.min_chi = *std::min_element(h.chi_values.begin(), h.chi_values.end());
  h.max_chi = *std::max_element(h.chi_values.begin(), h.chi_values.end());
  h.mean_chi = sum / static_cast<double>(h.chi_values.size());
  h.violation_fraction = static_cast<double>(violations) /
                         static_cast<double>(h.chi_values.size());

  const double lo = static_cast<double>(family.L - 2 * family.degree.d - 1);
  const double hi = static_cast<double>(family.L);
  const double width = (hi - lo) / histogram_bins;
  for (int b = 0; b <= histogram_bins; ++b)
    h.bin_edges.push_back(lo + width * b);
  h.counts.assign(histogram_bins, 0);
  for (const double v : h.chi_values) {
    int b = static_cast<int>(std::floor((v - lo) / width));
    b = std::clamp(b, 0, histogram_bins - 1);
    ++h.counts[b];
  }
  return h;
}

}  // namespace qcw
