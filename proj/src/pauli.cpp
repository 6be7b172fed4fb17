#include "qcw/pauli.hpp"

namespace qcw {
namespace {

void check_same_size(const PauliOperator& u, const PauliOperator& v) {
  if (u.n_qubits != v.n_qubits)
    throw dimension_error("operand qubit counts differ: " +
                          std::to_string(u.n_qubits) + " vs " +
                          std::to_string(v.n_qubits));
}

// i^k phase of the single-qubit product, indexed by letter codes (0=I, 1=X,
// 2=Z, 3=Y): X*Z = -iY, Z*X = iY, X*Y = iZ, Y*X = -iZ, Y*Z = iX, Z*Y = -iX.
constexpr std::uint8_t phase_tab[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 3, 1},
    {0, 1, 0, 3},
    {0, 3, 1, 0},
};

}  // namespace

PauliOperator pauli_from_string(std::string_view s) {
  if (s.empty() || s.size() > PauliOperator::max_qubits)
    throw config_error("operator string length must be in [1, " +
                       std::to_string(PauliOperator::max_qubits) + "]: \"" +
                       std::string(s) + "\"");
  PauliOperator p;
  p.n_qubits = static_cast<std::uint8_t>(s.size());
  for (std::size_t q = 0; q < s.size(); ++q) {
    switch (s[q]) {
      case 'I': break;
      case 'X': p.x_bits |= 1u << q; break;
      case 'Z': p.z_bits |= 1u << q; break;
      case 'Y': p.x_bits |= 1u << q; p.z_bits |= 1u << q; break;
      default:
        throw config_error(std::string("bad Pauli letter '") + s[q] +
                           "' in \"" + std::string(s) + "\"");
    }
  }
  return p;
}

std::string to_string(const PauliOperator& p) {
  static constexpr char letters[4] = {'I', 'X', 'Z', 'Y'};
  std::string s(p.n_qubits, 'I');
  for (int q = 0; q < p.n_qubits; ++q) s[q] = letters[p.letter(q)];
  return s;
}

PointId point_id(const PauliOperator& p) {
  const int n = p.n_qubits;
  PointId id = 0;
  for (int q = 0; q < n; ++q) id = (id << 1) | ((p.x_bits >> q) & 1u);
  for (int q = 0; q < n; ++q) id = (id << 1) | ((p.z_bits >> q) & 1u);
  return id;
}

PauliOperator pauli_from_point_id(PointId id, int n_qubits) {
  if (n_qubits < 1 || n_qubits > PauliOperator::max_qubits)
    throw config_error("qubit count out of range: " + std::to_string(n_qubits));
  if (n_qubits < 32 && (id >> (2 * n_qubits)) != 0)
    throw config_error("point id " + std::to_string(id) + " too large for " +
                       std::to_string(n_qubits) + " qubits");
  PauliOperator p;
  p.n_qubits = static_cast<std::uint8_t>(n_qubits);
  for (int q = 0; q < n_qubits; ++q) {
    p.x_bits |= ((id >> (2 * n_qubits - 1 - q)) & 1u) << q;
    p.z_bits |= ((id >> (n_qubits - 1 - q)) & 1u) << q;
  }
  return p;
}

int symplectic_form(const PauliOperator& u, const PauliOperator& v) {
  check_same_size(u, v);
  return __builtin_parity((u.x_bits & v.z_bits) ^ (u.z_bits & v.x_bits));
}

bool commutes(const PauliOperator& u, const PauliOperator& v) {
  return symplectic_form(u, v) == 0;
}

PhasedPauli multiply(const PauliOperator& u, const PauliOperator& v) {
  check_same_size(u, v);
  PhasedPauli r;
  r.op.n_qubits = u.n_qubits;
  r.op.x_bits = u.x_bits ^ v.x_bits;
  r.op.z_bits = u.z_bits ^ v.z_bits;
  unsigned k = 0;
  for (int q = 0; q < u.n_qubits; ++q) k += phase_tab[u.letter(q)][v.letter(q)];
  r.phase_exp = static_cast<std::uint8_t>(k & 3u);
  return r;
}

int y_count(const PauliOperator& p) {
  return __builtin_popcount(p.x_bits & p.z_bits);
}

bool is_symmetric(const PauliOperator& p) { return (y_count(p) & 1) == 0; }

int line_sign(const PauliOperator& a, const PauliOperator& b,
              const PauliOperator& c) {
  if (!commutes(a, b) || !commutes(a, c) || !commutes(b, c))
    throw not_a_line_error("triple does not pairwise commute");
  const PhasedPauli ab = multiply(a, b);
  const PhasedPauli abc = multiply(ab.op, c);
  if (!abc.op.is_identity())
    throw not_a_line_error("triple does not multiply to +/- identity");
  switch ((ab.phase_exp + abc.phase_exp) & 3u) {
    case 0: return 1;
    case 2: return -1;
    default:
      throw not_a_line_error("triple product is not Hermitian");
  }
}

PauliOperator embed(const PauliOperator& p, int n_total, int offset) {
  if (n_total < 1 || n_total > PauliOperator::max_qubits)
    throw dimension_error("embed: register size out of range");
  if (offset < 0 || offset + p.n_qubits > n_total)
    throw dimension_error("embed: window [" + std::to_string(offset) + ", " +
                          std::to_string(offset + p.n_qubits) +
                          ") outside register of size " +
                          std::to_string(n_total));
  PauliOperator r;
  r.n_qubits = static_cast<std::uint8_t>(n_total);
  r.x_bits = p.x_bits << offset;
  r.z_bits = p.z_bits << offset;
  return r;
}

}  // namespace qcw
