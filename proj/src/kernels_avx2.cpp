// AVX2 variants of the kernel table. Compiled with -mavx2 -mfma -mpopcnt in
// its own translation unit; only reached through the dispatch table after a
// runtime CPU-feature check.

#include <immintrin.h>

#include "qcw/kernels.hpp"

namespace qcw::kern {
namespace {

inline double par_sign(std::uint64_t v) {
  return __builtin_parityll(v) ? -1.0 : 1.0;
}

// (re,im) pairs are interleaved, two complex values per 256-bit vector.
inline __m256d swap_halves(__m256d v) { return _mm256_permute2f128_pd(v, v, 0x01); }
inline __m256d swap_within(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// Multiply two complex lanes by the scalar complex c.
inline __m256d cmul(__m256d v, __m256d cre, __m256d cim) {
  return _mm256_addsub_pd(_mm256_mul_pd(v, cre),
                          _mm256_mul_pd(swap_within(v), cim));
}

inline __m256d sign_lanes(double s0, double s1) {
  return _mm256_setr_pd(s0, s0, s1, s1);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

std::uint64_t xor_popcount_avx2(std::uint64_t* dst, const std::uint64_t* src,
                                std::size_t nw) {
  std::uint64_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= nw; i += 4) {
    const __m256i x = _mm256_xor_si256(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i)),
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), x);
    c += static_cast<std::uint64_t>(__builtin_popcountll(dst[i])) +
         static_cast<std::uint64_t>(__builtin_popcountll(dst[i + 1])) +
         static_cast<std::uint64_t>(__builtin_popcountll(dst[i + 2])) +
         static_cast<std::uint64_t>(__builtin_popcountll(dst[i + 3]));
  }
  for (; i < nw; ++i) {
    dst[i] ^= src[i];
    c += static_cast<std::uint64_t>(__builtin_popcountll(dst[i]));
  }
  return c;
}

std::uint64_t and_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t nw) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < nw; ++i)
    c += static_cast<std::uint64_t>(__builtin_popcountll(a[i] & b[i]));
  return c;
}

std::uint64_t popcount_avx2(const std::uint64_t* a, std::size_t nw) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < nw; ++i)
    c += static_cast<std::uint64_t>(__builtin_popcountll(a[i]));
  return c;
}

cplx pauli_phase_sum_avx2(const cplx* amps, std::size_t n, std::uint64_t xm,
                          std::uint64_t zm) {
  if (n < 2) return scalar_kernels().pauli_phase_sum(amps, n, xm, zm);
  const double* a = reinterpret_cast<const double*>(amps);
  const __m256d im_neg = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  const bool odd = (xm & 1) != 0;
  for (std::uint64_t b = 0; b < n; b += 2) {
    __m256d va = _mm256_loadu_pd(a + 2 * b);
    __m256d vc = _mm256_loadu_pd(a + 2 * ((b ^ xm) & ~1ULL));
    if (odd) vc = swap_halves(vc);
    va = _mm256_mul_pd(va, sign_lanes(par_sign(b & zm), par_sign((b + 1) & zm)));
    // conj(a)*c accumulated as separate re/im lane sums:
    //   re: ar*cr + ai*ci   im: ar*ci - ai*cr
    acc_re = _mm256_fmadd_pd(va, vc, acc_re);
    acc_im = _mm256_fmadd_pd(_mm256_mul_pd(va, im_neg), swap_within(vc), acc_im);
  }
  return {hsum(acc_re), hsum(acc_im)};
}

double pauli_project_avx2(cplx* amps, std::size_t n, std::uint64_t xm,
                          std::uint64_t zm, cplx coeff) {
  if (n < 2) return scalar_kernels().pauli_project(amps, n, xm, zm, coeff);
  double* a = reinterpret_cast<double*>(amps);
  const __m256d cre = _mm256_set1_pd(coeff.real());
  const __m256d cim = _mm256_set1_pd(coeff.imag());
  const __m256d half = _mm256_set1_pd(0.5);
  __m256d acc = _mm256_setzero_pd();

  if (xm == 0) {
    for (std::uint64_t b = 0; b < n; b += 2) {
      const __m256d va = _mm256_loadu_pd(a + 2 * b);
      const __m256d vs = _mm256_mul_pd(
          va, sign_lanes(par_sign(b & zm), par_sign((b + 1) & zm)));
      const __m256d w =
          _mm256_mul_pd(half, _mm256_add_pd(va, cmul(vs, cre, cim)));
      _mm256_storeu_pd(a + 2 * b, w);
      acc = _mm256_fmadd_pd(w, w, acc);
    }
  } else if (xm == 1) {
    for (std::uint64_t b = 0; b < n; b += 2) {
      const __m256d va = _mm256_loadu_pd(a + 2 * b);
      const __m256d vc = _mm256_mul_pd(
          swap_halves(va), sign_lanes(par_sign(b & zm), par_sign((b + 1) & zm)));
      const __m256d w =
          _mm256_mul_pd(half, _mm256_add_pd(va, cmul(vc, cre, cim)));
      _mm256_storeu_pd(a + 2 * b, w);
      acc = _mm256_fmadd_pd(w, w, acc);
    }
  } else {
    const std::uint64_t hb = 1ULL << (63 - __builtin_clzll(xm));
    const bool odd = (xm & 1) != 0;
    for (std::uint64_t base = 0; base < n; base += 2 * hb) {
      for (std::uint64_t t = 0; t < hb; t += 2) {
        const std::uint64_t b = base + t;
        const std::uint64_t q = (b ^ xm) & ~1ULL;
        const __m256d va = _mm256_loadu_pd(a + 2 * b);
        const __m256d vc = _mm256_loadu_pd(a + 2 * q);
        const __m256d vc_al = odd ? swap_halves(vc) : vc;
        const __m256d va_al = odd ? swap_halves(va) : va;
        const __m256d sa = sign_lanes(par_sign(b & zm), par_sign((b + 1) & zm));
        const __m256d sp = sign_lanes(par_sign(q & zm), par_sign((q + 1) & zm));
        const __m256d wa = _mm256_mul_pd(
            half, _mm256_add_pd(va, cmul(_mm256_mul_pd(vc_al, sa), cre, cim)));
        const __m256d wp = _mm256_mul_pd(
            half, _mm256_add_pd(vc, cmul(_mm256_mul_pd(va_al, sp), cre, cim)));
        _mm256_storeu_pd(a + 2 * b, wa);
        _mm256_storeu_pd(a + 2 * q, wp);
        acc = _mm256_fmadd_pd(wa, wa, acc);
        acc = _mm256_fmadd_pd(wp, wp, acc);
      }
    }
  }
  return hsum(acc);
}

void pauli_apply_avx2(cplx* amps, std::size_t n, std::uint64_t xm,
                      std::uint64_t zm, cplx coeff) {
  if (n < 2) {
    scalar_kernels().pauli_apply(amps, n, xm, zm, coeff);
    return;
  }
  double* a = reinterpret_cast<double*>(amps);
  const __m256d cre = _mm256_set1_pd(coeff.real());
  const __m256d cim = _mm256_set1_pd(coeff.imag());

  if (xm == 0) {
    for (std::uint64_t b = 0; b < n; b += 2) {
      const __m256d va = _mm256_loadu_pd(a + 2 * b);
      const __m256d vs = _mm256_mul_pd(
          va, sign_lanes(par_sign(b & zm), par_sign((b + 1) & zm)));
      _mm256_storeu_pd(a + 2 * b, cmul(vs, cre, cim));
    }
  } else if (xm == 1) {
    for (std::uint64_t b = 0; b < n; b += 2) {
      const __m256d vc = _mm256_mul_pd(
          swap_halves(_mm256_loadu_pd(a + 2 * b)),
          sign_lanes(par_sign(b & zm), par_sign((b + 1) & zm)));
      _mm256_storeu_pd(a + 2 * b, cmul(vc, cre, cim));
    }
  } else {
    const std::uint64_t hb = 1ULL << (63 - __builtin_clzll(xm));
    const bool odd = (xm & 1) != 0;
    for (std::uint64_t base = 0; base < n; base += 2 * hb) {
      for (std::uint64_t t = 0; t < hb; t += 2) {
        const std::uint64_t b = base + t;
        const std::uint64_t q = (b ^ xm) & ~1ULL;
        const __m256d va = _mm256_loadu_pd(a + 2 * b);
        const __m256d vc = _mm256_loadu_pd(a + 2 * q);
        const __m256d vc_al = odd ? swap_halves(vc) : vc;
        const __m256d va_al = odd ? swap_halves(va) : va;
        const __m256d sa = sign_lanes(par_sign(b & zm), par_sign((b + 1) & zm));
        const __m256d sp = sign_lanes(par_sign(q & zm), par_sign((q + 1) & zm));
        _mm256_storeu_pd(a + 2 * b, cmul(_mm256_mul_pd(vc_al, sa), cre, cim));
        _mm256_storeu_pd(a + 2 * q, cmul(_mm256_mul_pd(va_al, sp), cre, cim));
      }
    }
  }
}

void scale_avx2(cplx* amps, std::size_t n, double factor) {
  double* a = reinterpret_cast<double*>(amps);
  const __m256d f = _mm256_set1_pd(factor);
  std::uint64_t b = 0;
  for (; b + 2 <= n; b += 2)
    _mm256_storeu_pd(a + 2 * b, _mm256_mul_pd(_mm256_loadu_pd(a + 2 * b), f));
  for (; b < n; ++b) amps[b] *= factor;
}

const KernelTable table = {
    "avx2",
    xor_popcount_avx2,
    and_popcount_avx2,
    popcount_avx2,
    pauli_phase_sum_avx2,
    pauli_project_avx2,
    pauli_apply_avx2,
    scale_avx2,
};

}  // namespace

const KernelTable& avx2_kernels() { return table; }

}  // namespace qcw::kern
