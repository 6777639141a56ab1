#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace giqs {

using Real = double;
using Cplx = std::complex<double>;
using VecD = Eigen::VectorXd;
using VecI = Eigen::VectorXi;
using MatD = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

// Japanese bracket <x> = sqrt(1 + x^2)
inline double jbracket(double x) { return std::sqrt(1.0 + x * x); }

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// FNV-1a, used for config hashes and seed derivation. Stable across runs.
inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic PRNG. All randomness in the toolkit flows through this so
// that a fixed seed reproduces every report bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    for (int i = 0; i < 4; ++i) splitmix64(state_);
  }

  // derive an independent stream for a named sub-task
  Rng split(std::string_view tag) const {
    return Rng(state_ ^ fnv1a64(tag, 0x9e3779b97f4a7c15ull));
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  double uniform() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  VecD unit_vector(int d) {
    VecD v(d);
    double n = 0.0;
    do {
      for (int i = 0; i < d; ++i) v[i] = normal();
      n = v.norm();
    } while (n < 1e-12);
    return v / n;
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace giqs
