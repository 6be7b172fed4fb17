#pragma once

#include <array>
#include <complex>
#include <vector>

#include "qcw/pauli.hpp"
#include "qcw/rng.hpp"

namespace qcw {

using cplx = std::complex<double>;

struct NoiseParams {
  // Probability, per qubit and per measured observable, of a uniformly random
  // non-identity single-qubit Pauli applied before the measurement.
  double p_depolarize = 0.0;
  // Probability of flipping the reported outcome after the measurement.
  double p_readout = 0.0;

  bool zero() const { return p_depolarize == 0.0 && p_readout == 0.0; }
  void validate() const;
};

struct MeasurementRecord {
  PauliOperator observable;
  int outcome;  // reported +/-1, after readout noise
};

// Dense 2^n statevector. Amplitude index bit (n-1-q) holds qubit q, so the
// basis label reads left to right like the operator strings.
class StateVector {
 public:
  explicit StateVector(int n_qubits);  // |0...0>

  static StateVector zeros(int n_qubits) { return StateVector(n_qubits); }
  static StateVector haar_random(int n_qubits, RngStream& rng);
  // n_pairs Bell pairs |Phi+> on 2*n_pairs qubits; pair i couples qubits
  // (i, n_pairs + i), i.e. point operators embed at offset 0 and their
  // partners at offset n_pairs.
  static StateVector bell_pairs(int n_pairs);
  // n_parties-partite GHZ blocks on n_parties*n_blocks qubits; block i
  // couples qubits {i, n+i, 2n+i, ...} across the party registers.
  static StateVector ghz_blocks(int n_blocks, int n_parties);

  int n_qubits() const { return n_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  double norm() const;

  // <psi| P |psi> for Hermitian P = i^{#Y} X^x Z^z.
  double expectation(const PauliOperator& op) const;

  // Projective measurement; collapses the state, returns the true outcome.
  // Branch probabilities within 1e-9 of 0 or 1 are treated as exact so
  // noiseless stabilizer measurements are deterministic.
  int measure(const PauliOperator& op, RngStream& rng);

  void apply_pauli(const PauliOperator& op);

  // With probability p per qubit in [first, first + count), apply a uniformly
  // random X/Y/Z there. count < 0 means the whole register.
  void depolarize(double p, RngStream& rng, int first = 0, int count = -1);

 private:
  std::uint64_t amp_mask(std::uint32_t op_bits) const;

  int n_;
  std::vector<cplx> amps_;
};

// Outcome correction for the second party of a Bell-resource game measuring
// the same operator: <Phi+|^n P (x) P |Phi+>^n = (-1)^{#Y(P)}.
int mirror_sign(const PauliOperator& op);

// Measure a context (pairwise commuting closing triple) in order, with the
// noise model applied around each observable. Throws not_a_line_error if the
// triple is not a context.
std::array<MeasurementRecord, 3> measure_context(
    StateVector& state, const std::array<PauliOperator, 3>& ops,
    const NoiseParams& noise, RngStream& rng);

}  // namespace qcw
