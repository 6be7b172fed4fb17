#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qcw/common.hpp"

namespace qcw {

// N-qubit Pauli operator, phase-free, encoded as a pair of GF(2) vectors.
// Qubit i holds the letter (x_i, z_i): I=(0,0), X=(1,0), Z=(0,1), Y=(1,1).
// Bit i of x_bits/z_bits is qubit i; qubit 0 is the leftmost letter of the
// string form, so "XZ" means X on qubit 0 and Z on qubit 1.
struct PauliOperator {
  static constexpr int max_qubits = 16;

  std::uint8_t n_qubits = 1;
  std::uint32_t x_bits = 0;
  std::uint32_t z_bits = 0;

  bool is_identity() const { return x_bits == 0 && z_bits == 0; }

  // Letter code x + 2z on qubit q: 0=I, 1=X, 2=Z, 3=Y.
  int letter(int q) const {
    return static_cast<int>((x_bits >> q) & 1u) +
           2 * static_cast<int>((z_bits >> q) & 1u);
  }

  friend bool operator==(const PauliOperator&, const PauliOperator&) = default;
};

// Product tracked up to to a power of i: (op, k) represents i^k * op.
struct PhasedPauli {
  PauliOperator op;
  std::uint8_t phase_exp = 0;  // k in i^k, mod 4

  friend bool operator==(const PhasedPauli&, const PhasedPauli&) = default;
};

// Canonical integer id: the value of the concatenated big-endian bit string
// x_0..x_{N-1} z_0..z_{N-1}. Gives a total order on the points of a space;
// the identity gets id 0 and never appears as a point.
using PointId = std::uint32_t;

// Parse "XYZI..." (throws config_error on bad letters or length outside
// [1, max_qubits]).
PauliOperator pauli_from_string(std::string_view s);
std::string to_string(const PauliOperator& p);

PointId point_id(const PauliOperator& p);
PauliOperator pauli_from_point_id(PointId id, int n_qubits);

// Symplectic form <u,v> = sum_i (u.x_i v.z_i + u.z_i v.x_i) mod 2.
// 0 iff the operators commute. Throws dimension_error on size mismatch.
int symplectic_form(const PauliOperator& u, const PauliOperator& v);
bool commutes(const PauliOperator& u, const PauliOperator& v);

// u * v with the i^k phase tracked exactly.
PhasedPauli multiply(const PauliOperator& u, const PauliOperator& v);

int y_count(const PauliOperator& p);

// Symmetric (real) operators are those with an even number of Y letters.
bool is_symmetric(const PauliOperator& p);

// Sign of the product a*b*c for a closing commuting triple (a*b*c must be
// +/- identity; throws not_a_line_error otherwise). Returns +1 or -1.
int line_sign(const PauliOperator& a, const PauliOperator& b,
              const PauliOperator& c);

// Same operator acting on qubits [offset, offset + p.n_qubits) of a larger
// register, identity elsewhere.
PauliOperator embed(const PauliOperator& p, int n_total, int offset);

}  // namespace qcw
