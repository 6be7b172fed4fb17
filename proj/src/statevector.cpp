#include "qcw/statevector.hpp"

#include <cmath>

#include "qcw/kernels.hpp"

namespace qcw {
namespace {

constexpr int max_state_qubits = 16;
constexpr double branch_eps = 1e-9;

// (-i)^k for k = #Y mod 4: the coefficient in
//   (P psi)[b] = coeff * (-1)^parity(b & z) * psi[b ^ x]
// for Hermitian P = i^{#Y} X^x Z^z with masks in amplitude index space.
cplx hermitian_coeff(const PauliOperator& op) {
  switch (y_count(op) & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace

void NoiseParams::validate() const {
  if (!(p_depolarize >= 0.0 && p_depolarize <= 1.0))
    throw config_error("p_depolarize must be in [0, 1]");
  if (!(p_readout >= 0.0 && p_readout <= 1.0))
    throw config_error("p_readout must be in [0, 1]");
}

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > max_state_qubits)
    throw config_error("state size must be 1..16 qubits, got " +
                       std::to_string(n_qubits));
  amps_.assign(std::size_t{1} << n_, cplx{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector StateVector::haar_random(int n_qubits, RngStream& rng) {
  StateVector s(n_qubits);
  double norm2 = 0.0;
  for (auto& a : s.amps_) {
    a = cplx{rng.normal(), rng.normal()};
    norm2 += std::norm(a);
  }
  kern::active().scale(s.amps_.data(), s.amps_.size(), 1.0 / std::sqrt(norm2));
  return s;
}

StateVector StateVector::bell_pairs(int n_pairs) {
  if (n_pairs < 1 || 2 * n_pairs > max_state_qubits)
    throw config_error("bell_pairs: pair count out of range");
  StateVector s(2 * n_pairs);
  s.amps_[0] = 0.0;
  const int n = s.n_;
  const double amp = std::pow(0.5, 0.5 * n_pairs);
  for (std::uint64_t t = 0; t < (std::uint64_t{1} << n_pairs); ++t) {
    std::uint64_t idx = 0;
    for (int i = 0; i < n_pairs; ++i)
      if ((t >> i) & 1u)
        idx |= (std::uint64_t{1} << (n - 1 - i)) |
               (std::uint64_t{1} << (n - 1 - (n_pairs + i)));
    s.amps_[idx] = amp;
  }
  return s;
}

StateVector StateVector::ghz_blocks(int n_blocks, int n_parties) {
  if (n_blocks < 1 || n_parties < 2 ||
      n_blocks * n_parties > max_state_qubits)
    throw config_error("ghz_blocks: register out of range");
  StateVector s(n_blocks * n_parties);
  s.amps_[0] = 0.0;
  const int n = s.n_;
  const double amp = std::pow(0.5, 0.5 * n_blocks);
  for (std::uint64_t t = 0; t < (std::uint64_t{1} << n_blocks); ++t) {
    std::uint64_t idx = 0;
    for (int i = 0; i < n_blocks; ++i)
      if ((t >> i) & 1u)
        for (int party = 0; party < n_parties; ++party)
          idx |= std::uint64_t{1} << (n - 1 - (party * n_blocks + i));
    s.amps_[idx] = amp;
  }
  return s;
}

std::uint64_t StateVector::amp_mask(std::uint32_t op_bits) const {
  std::uint64_t m = 0;
  for (int q = 0; q < n_; ++q)
    if ((op_bits >> q) & 1u) m |= std::uint64_t{1} << (n_ - 1 - q);
  return m;
}

double StateVector::norm() const {
  double norm2 = 0.0;
  for (const auto& a : amps_) norm2 += std::norm(a);
  return std::sqrt(norm2);
}

double StateVector::expectation(const PauliOperator& op) const {
  if (op.n_qubits != n_)
    throw dimension_error("operator size does not match state");
  const cplx sum = kern::active().pauli_phase_sum(
      amps_.data(), amps_.size(), amp_mask(op.x_bits), amp_mask(op.z_bits));
  const cplx e = hermitian_coeff(op) * sum;
  if (std::abs(e.imag()) > 1e-7)
    throw internal_error("expectation of a Hermitian operator came out "
                         "complex");
  return e.real();
}

int StateVector::measure(const PauliOperator& op, RngStream& rng) {
  double e = expectation(op);
  if (e > 1.0) e = 1.0;
  if (e < -1.0) e = -1.0;
  const double p_plus = 0.5 * (1.0 + e);
  int outcome;
  if (p_plus >= 1.0 - branch_eps)
    outcome = 1;
  else if (p_plus <= branch_eps)
    outcome = -1;
  else
    outcome = rng.uniform() < p_plus ? 1 : -1;
  const cplx coeff = static_cast<double>(outcome) * hermitian_coeff(op);
  const double norm2 = kern::active().pauli_project(
      amps_.data(), amps_.size(), amp_mask(op.x_bits), amp_mask(op.z_bits),
      coeff);
  if (!(norm2 > 0.0))
    throw internal_error("measurement branch has zero probability");
  kern::active().scale(amps_.data(), amps_.size(), 1.0 / std::sqrt(norm2));
  return outcome;
}

void StateVector::apply_pauli(const PauliOperator& op) {
  if (op.n_qubits != n_)
    throw dimension_error("operator size does not match state");
  kern::active().pauli_apply(amps_.data(), amps_.size(), amp_mask(op.x_bits),
                             amp_mask(op.z_bits), hermitian_coeff(op));
}

void StateVector::depolarize(double p, RngStream& rng, int first, int count) {
  if (p <= 0.0) return;
  if (count < 0) count = n_ - first;
  if (first < 0 || first + count > n_)
    throw dimension_error("depolarize: qubit window out of range");
  static const char* letters[3] = {"X", "Y", "Z"};
  for (int q = first; q < first + count; ++q) {
    if (rng.uniform() >= p) continue;
    const PauliOperator single = pauli_from_string(letters[rng.below(3)]);
    apply_pauli(embed(single, n_, q));
  }
}

int mirror_sign(const PauliOperator& op) { return y_count(op) & 1 ? -1 : 1; }

std::array<MeasurementRecord, 3> measure_context(
    StateVector& state, const std::array<PauliOperator, 3>& ops,
    const NoiseParams& noise, RngStream& rng) {
  noise.validate();
  (void)line_sign(ops[0], ops[1], ops[2]);  // context precondition
  std::array<MeasurementRecord, 3> out;
  for (int i = 0; i < 3; ++i) {
    if (noise.p_depolarize > 0.0) state.depolarize(noise.p_depolarize, rng);
    int reported = state.measure(ops[i], rng);
    if (noise.p_readout > 0.0 && rng.uniform() < noise.p_readout)
      reported = -reported;
    out[i] = {ops[i], reported};
  }
  return out;
}

}  // namespace qcw
