#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "qcw/kernels.hpp"
#include "qcw/rng.hpp"

using namespace qcw;
using kern::cplx;

namespace {

std::vector<std::uint64_t> random_words(RngStream& rng, std::size_t n) {
  std::vector<std::uint64_t> w(n);
  for (auto& v : w) v = rng.next();
  return w;
}

std::vector<cplx> random_state(RngStream& rng, std::size_t n) {
  std::vector<cplx> amps(n);
  for (auto& a : amps) a = {rng.normal(), rng.normal()};
  return amps;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// every table other than the scalar reference
std::vector<const kern::KernelTable*> variant_tables() {
  std::vector<const kern::KernelTable*> out;
#ifdef QCW_HAVE_AVX2
  for (const auto& name : kern::available())
    if (name != "scalar" && kern::select(name)) out.push_back(&kern::active());
  kern::select("scalar");
#endif
  return out;
}

}  // namespace

TEST_CASE("scalar integer kernels match a naive loop") {
  const auto& k = kern::scalar_kernels();
  RngStream rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t nw = 1 + rng.below(8);
    auto a = random_words(rng, nw);
    const auto b = random_words(rng, nw);
    std::uint64_t want_and = 0, want_pop = 0, want_xor = 0;
    for (std::size_t i = 0; i < nw; ++i) {
      want_and += std::popcount(a[i] & b[i]);
      want_pop += std::popcount(a[i]);
      want_xor += std::popcount(a[i] ^ b[i]);
    }
    CHECK(k.and_popcount(a.data(), b.data(), nw) == want_and);
    CHECK(k.popcount(a.data(), nw) == want_pop);
    auto dst = a;
    CHECK(k.xor_popcount(dst.data(), b.data(), nw) == want_xor);
    for (std::size_t i = 0; i < nw; ++i) CHECK(dst[i] == (a[i] ^ b[i]));
  }
}

TEST_CASE("variant integer kernels are bit-exact against scalar") {
  const auto& ref = kern::scalar_kernels();
  for (const auto* k : variant_tables()) {
    RngStream rng(12);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t nw = 1 + rng.below(9);
      auto a = random_words(rng, nw);
      const auto b = random_words(rng, nw);
      CHECK(k->and_popcount(a.data(), b.data(), nw) ==
            ref.and_popcount(a.data(), b.data(), nw));
      CHECK(k->popcount(a.data(), nw) == ref.popcount(a.data(), nw));
      auto d1 = a, d2 = a;
      CHECK(k->xor_popcount(d1.data(), b.data(), nw) ==
            ref.xor_popcount(d2.data(), b.data(), nw));
      CHECK(d1 == d2);
    }
  }
}

TEST_CASE("scalar pauli kernels implement the defining formulas") {
  const auto& k = kern::scalar_kernels();
  RngStream rng(13);
  for (int nq = 1; nq <= 6; ++nq) {
    const std::size_t n = std::size_t{1} << nq;
    for (int trial = 0; trial < 8; ++trial) {
      const auto amps = random_state(rng, n);
      const std::uint64_t xm = rng.below(n), zm = rng.below(n);

      cplx want = 0;
      for (std::size_t b = 0; b < n; ++b) {
        const double s = std::popcount(b & zm) & 1 ? -1.0 : 1.0;
        want += s * std::conj(amps[b]) * amps[b ^ xm];
      }
      CHECK(std::abs(k.pauli_phase_sum(amps.data(), n, xm, zm) - want) <
            1e-12 * n);

      const cplx coeff{rng.normal(), rng.normal()};
      std::vector<cplx> applied(n);
      for (std::size_t b = 0; b < n; ++b) {
        const double s = std::popcount(b & zm) & 1 ? -1.0 : 1.0;
        applied[b] = coeff * s * amps[b ^ xm];
      }
      auto got = amps;
      k.pauli_apply(got.data(), n, xm, zm, coeff);
      CHECK(max_diff(got, applied) < 1e-12);

      double want_norm = 0;
      std::vector<cplx> projected(n);
      for (std::size_t b = 0; b < n; ++b) {
        projected[b] = (amps[b] + applied[b]) * 0.5;
        want_norm += std::norm(projected[b]);
      }
      got = amps;
      const double norm = k.pauli_project(got.data(), n, xm, zm, coeff);
      CHECK(max_diff(got, projected) < 1e-12);
      CHECK(norm == doctest::Approx(want_norm).epsilon(1e-12));
    }
  }
}

TEST_CASE("variant pauli kernels agree with scalar") {
  const auto& ref = kern::scalar_kernels();
  for (const auto* k : variant_tables()) {
    RngStream rng(14);
    for (int nq = 1; nq <= 10; ++nq) {
      const std::size_t n = std::size_t{1} << nq;
      for (int trial = 0; trial < 6; ++trial) {
        const auto amps = random_state(rng, n);
        const std::uint64_t xm = rng.below(n), zm = rng.below(n);
        const cplx coeff{rng.normal(), rng.normal()};

        CHECK(std::abs(k->pauli_phase_sum(amps.data(), n, xm, zm) -
                       ref.pauli_phase_sum(amps.data(), n, xm, zm)) <
              1e-10 * n);

        auto a1 = amps, a2 = amps;
        k->pauli_apply(a1.data(), n, xm, zm, coeff);
        ref.pauli_apply(a2.data(), n, xm, zm, coeff);
        CHECK(max_diff(a1, a2) < 1e-11);

        a1 = amps;
        a2 = amps;
        const double n1 = k->pauli_project(a1.data(), n, xm, zm, coeff);
        const double n2 = ref.pauli_project(a2.data(), n, xm, zm, coeff);
        CHECK(max_diff(a1, a2) < 1e-11);
        CHECK(n1 == doctest::Approx(n2).epsilon(1e-10));

        a1 = amps;
        a2 = amps;
        k->scale(a1.data(), n, 0.37);
        ref.scale(a2.data(), n, 0.37);
        CHECK(max_diff(a1, a2) < 1e-12);
      }
    }
  }
}

TEST_CASE("kernel selection") {
  const auto names = kern::available();
  CHECK(!names.empty());
  CHECK(names.front() == "scalar");
  CHECK(kern::select("scalar"));
  CHECK(std::string(kern::active().name) == "scalar");
  CHECK_FALSE(kern::select("no-such-kernel"));
  // restore the best table for other tests
  for (const auto& n : names) kern::select(n);
}
