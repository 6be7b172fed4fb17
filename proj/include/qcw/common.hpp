#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qcw {

// Operands disagree on qubit count.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A triple fails the commuting/closing precondition of a context line.
struct not_a_line_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad user-facing configuration; maps to CLI exit code 1.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated internal invariant; maps to CLI exit code 2.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Exact fraction for win rates and game values.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw internal_error("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num = n;
    den = d;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }
};

// Fixed 6-decimal rounding applied to every real written into an artifact,
// so that identical runs produce byte-identical files.
double round6(double x);

std::uint64_t fnv1a64(std::string_view s);
std::string hex_u64(std::uint64_t v);

}  // namespace qcw
