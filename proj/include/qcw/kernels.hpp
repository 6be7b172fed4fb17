#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qcw::kern {

using cplx = std::complex<double>;

// Hot inner loops shared by the degree solver (word-wise XOR/AND + popcount
// over line-incidence bitsets) and the statevector simulator (Pauli action on
// interleaved complex amplitude arrays).
//
// The scalar table is the reference implementation. Vector variants must
// agree with it: bit-exact for the integer ops, within small floating-point
// reassociation error for the amplitude ops. Equivalence is enforced by
// property tests that run every available table against the scalar one.
//
// A Pauli operator acts on amplitudes as
//   (P psi)[b] = coeff * (-1)^parity(b & z_mask) * psi[b ^ x_mask]
// where x_mask/z_mask are the operator's bit masks remapped to amplitude
// index space and coeff is its (-i)^{#Y} Hermiticity phase.
struct KernelTable {
  const char* name;

  // dst ^= src over nw words; returns popcount of dst afterwards.
  std::uint64_t (*xor_popcount)(std::uint64_t* dst, const std::uint64_t* src,
                                std::size_t nw);
  // popcount(a & b) over nw words.
  std::uint64_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t nw);
  // popcount(a) over nw words.
  std::uint64_t (*popcount)(const std::uint64_t* a, std::size_t nw);

  // sum_b (-1)^parity(b & z_mask) * conj(amps[b]) * amps[b ^ x_mask]
  // (the raw sum; caller multiplies by the operator's phase to get <P>).
  cplx (*pauli_phase_sum)(const cplx* amps, std::size_t n, std::uint64_t x_mask,
                          std::uint64_t z_mask);

  // amps[b] := (amps[b] + coeff * (-1)^parity(b & z_mask) * amps[b ^ x_mask]) / 2
  // in place; returns the squared norm of the result (the branch probability).
  // The outcome sign is folded into coeff by the caller.
  double (*pauli_project)(cplx* amps, std::size_t n, std::uint64_t x_mask,
                          std::uint64_t z_mask, cplx coeff);

  // amps[b] := coeff * (-1)^parity(b & z_mask) * amps[b ^ x_mask] in place.
  void (*pauli_apply)(cplx* amps, std::size_t n, std::uint64_t x_mask,
                      std::uint64_t z_mask, cplx coeff);

  // amps[b] *= factor.
  void (*scale)(cplx* amps, std::size_t n, double factor);
};

const KernelTable& scalar_kernels();
#ifdef QCW_HAVE_AVX2
const KernelTable& avx2_kernels();
#endif

// Active table. Chosen once from CPU features, overridable with the
// QCW_KERNEL environment variable ("scalar" or "avx2") or select().
const KernelTable& active();

// Switch the active table by name; false if that table is not available on
// this machine. Not thread-safe against concurrent kernel use.
bool select(const std::string& name);

std::vector<std::string> available();

}  // namespace qcw::kern
