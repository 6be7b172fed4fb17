#include "qcw/kernels.hpp"

namespace qcw::kern {
namespace {

inline double par_sign(std::uint64_t v) {
  return __builtin_parityll(v) ? -1.0 : 1.0;
}

std::uint64_t xor_popcount_scalar(std::uint64_t* dst, const std::uint64_t* src,
                                  std::size_t nw) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < nw; ++i) {
    dst[i] ^= src[i];
    c += static_cast<std::uint64_t>(__builtin_popcountll(dst[i]));
  }
  return c;
}

std::uint64_t and_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t nw) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < nw; ++i)
    c += static_cast<std::uint64_t>(__builtin_popcountll(a[i] & b[i]));
  return c;
}

std::uint64_t popcount_scalar(const std::uint64_t* a, std::size_t nw) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < nw; ++i)
    c += static_cast<std::uint64_t>(__builtin_popcountll(a[i]));
  return c;
}

cplx pauli_phase_sum_scalar(const cplx* amps, std::size_t n, std::uint64_t xm,
                            std::uint64_t zm) {
  cplx acc{0.0, 0.0};
  for (std::uint64_t b = 0; b < n; ++b)
    acc += par_sign(b & zm) * std::conj(amps[b]) * amps[b ^ xm];
  return acc;
}

double pauli_project_scalar(cplx* amps, std::size_t n, std::uint64_t xm,
                            std::uint64_t zm, cplx coeff) {
  double norm2 = 0.0;
  if (xm == 0) {
    for (std::uint64_t b = 0; b < n; ++b) {
      amps[b] = 0.5 * (amps[b] + coeff * par_sign(b & zm) * amps[b]);
      norm2 += std::norm(amps[b]);
    }
  } else {
    for (std::uint64_t b = 0; b < n; ++b) {
      const std::uint64_t p = b ^ xm;
      if (p < b) continue;
      const cplx ab = amps[b], ap = amps[p];
      amps[b] = 0.5 * (ab + coeff * par_sign(b & zm) * ap);
      amps[p] = 0.5 * (ap + coeff * par_sign(p & zm) * ab);
      norm2 += std::norm(amps[b]) + std::norm(amps[p]);
    }
  }
  return norm2;
}

void pauli_apply_scalar(cplx* amps, std::size_t n, std::uint64_t xm,
                        std::uint64_t zm, cplx coeff) {
  if (xm == 0) {
    for (std::uint64_t b = 0; b < n; ++b)
      amps[b] *= coeff * par_sign(b & zm);
  } else {
    for (std::uint64_t b = 0; b < n; ++b) {
      const std::uint64_t p = b ^ xm;
      if (p < b) continue;
      const cplx ab = amps[b], ap = amps[p];
      amps[b] = coeff * par_sign(b & zm) * ap;
      amps[p] = coeff * par_sign(p & zm) * ab;
    }
  }
}

void scale_scalar(cplx* amps, std::size_t n, double factor) {
  for (std::uint64_t b = 0; b < n; ++b) amps[b] *= factor;
}

const KernelTable table = {
    "scalar",
    xor_popcount_scalar,
    and_popcount_scalar,
    popcount_scalar,
    pauli_phase_sum_scalar,
    pauli_project_scalar,
    pauli_apply_scalar,
    scale_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() { return table; }

}  // namespace qcw::kern
