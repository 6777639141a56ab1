#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "giqs/common.hpp"

namespace giqs {

// Exact rational arithmetic on int64 with __int128 intermediates.
// Used for torus eigenvalues when the metric is rational, so that
// small-divisor identification (e.g. exact zeros in Melnikov scans)
// does not depend on floating point.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (den_ == 0) throw NumericError("Rational: zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  bool is_zero() const { return num_ == 0; }

  Rational operator-() const { return make(-static_cast<__int128>(num_), den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return make(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.num_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return make(n, d);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static Rational make(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim) throw NumericError("Rational: overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    Rational r = make(num_, den_);
    num_ = r.num_;
    den_ = r.den_;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace giqs
