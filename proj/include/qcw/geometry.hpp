#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qcw/pauli.hpp"

namespace qcw {

// A context line: three mutually commuting points whose product is +/-I.
// Indices refer to the owning geometry's point list and are stored ascending.
struct LineRecord {
  std::array<std::uint16_t, 3> points;
  std::int8_t sign;  // +1 or -1

  friend bool operator==(const LineRecord&, const LineRecord&) = default;
};

// Point-line incidence structure over N-qubit Pauli operators. Points are
// unique non-identity operators sorted by point_id; lines are unique sorted
// triples. Built by the constructors below or loaded from JSON.
struct IncidenceGeometry {
  std::string name;
  int n_qubits = 1;
  std::vector<PauliOperator> points;
  std::vector<LineRecord> lines;

  std::size_t point_count() const { return points.size(); }
  std::size_t line_count() const { return lines.size(); }

  // Index into points, or -1 if absent. Points are sorted by id, so this is
  // a binary search.
  int index_of(PointId id) const;

  int negative_line_count() const;

  // lines_through[p] = ids of lines incident with point p.
  std::vector<std::vector<std::uint16_t>> lines_through_points() const;

  // Recompute every structural invariant (sorted unique points, commuting
  // closing triples, stored signs, index bounds, no duplicate lines).
  // Throws internal_error on violation.
  void validate() const;
};

// W(2N-1, 2): all 4^N - 1 non-identity operators; lines are the closing
// commuting triples {a, b, a*b}. N in [1, 4].
IncidenceGeometry build_symplectic_space(int n_qubits);

// The canonical two-qubit Mermin-Peres square: rows
//   XI IX XX / IY ZI ZY / XY ZX YZ
// with its six row/column contexts (one negative: {XY, ZX, YZ}).
IncidenceGeometry build_mermin_square();

// W(3,2) doily: alias of build_symplectic_space(2).
IncidenceGeometry build_doily();

enum class QuadricKind { hyperbolic, elliptic };

// Quadric Q_p in the ambient space, determined by a center operator p:
//   q in Q_p  iff  (q commutes with p) == (q is symmetric).
// Hyperbolic when the center is symmetric (including identity), elliptic
// otherwise. Lines are the ambient lines lying wholly inside.
struct QuadricSpec {
  PauliOperator center;
  QuadricKind kind() const {
    return is_symmetric(center) ? QuadricKind::hyperbolic
                                : QuadricKind::elliptic;
  }
};

IncidenceGeometry build_quadric(const QuadricSpec& spec,
                                const IncidenceGeometry& ambient);

// All 4^N distinct quadrics of a full symplectic space (one per center,
// including the identity center).
std::vector<IncidenceGeometry> enumerate_quadrics(
    const IncidenceGeometry& ambient);

// Every embedded copy of `model` in `ambient`: each result is the sorted list
// of ambient point indices such that the induced lines realize the model's
// incidence structure (same line count; DFS with forced line closure).
std::vector<std::vector<std::uint16_t>> enumerate_subgeometries(
    const IncidenceGeometry& ambient, const IncidenceGeometry& model);

// Ambient line ids induced by a set of ambient point indices (lines with all
// three points inside the set).
std::vector<std::uint32_t> induced_line_ids(
    const IncidenceGeometry& ambient, const std::vector<std::uint16_t>& subset);

// JSON round-trip. Schema:
//   { "name": str, "n_qubits": int, "points": [str, ...],
//     "lines": [{"points": [i, j, k], "sign": +/-1}, ...] }
std::string geometry_to_json(const IncidenceGeometry& g);
IncidenceGeometry geometry_from_json(const std::string& text);
void write_geometry_json(const IncidenceGeometry& g, const std::string& path);
IncidenceGeometry load_geometry_json(const std::string& path);

}  // namespace qcw
