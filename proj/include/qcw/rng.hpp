#pragma once

#include <cmath>
#include <cstdint>

namespace qcw {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** stream seeded from (seed, stream_a, stream_b) via splitmix64.
// Self-contained so identical inputs give identical draws on every platform;
// std:: distributions are deliberately avoided for the same reason.
//
// Derivation indices pick independent streams for parallelizable work units:
// (seed, line_id, shot) for experiment shots, (seed, restart) for solver
// restarts, (seed, round) for sampled game rounds.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_a = 0,
                     std::uint64_t stream_b = 0) {
    std::uint64_t m = 0x6a09e667f3bcc909ULL ^ seed;
    (void)splitmix64(m);
    m ^= 0xbb67ae8584caa73bULL * (stream_a + 1);
    (void)splitmix64(m);
    m ^= 0x3c6ef372fe94f82bULL * (stream_b + 1);
    for (auto& w : s_) w = splitmix64(m);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0,n) (Lemire multiply-shift).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qcw
