#pragma once

#include <cmath>
#include <vector>

#include "giqs/intlattice.hpp"
#include "giqs/lattice.hpp"

namespace giqs {

struct ResonanceParams {
  double delta = 0.5;
  double mu = 0.25;
  double radius = 8.0;  // the R of the resonance relation

  void validate(double homogeneity) const {
    if (!(delta > 0.0 && delta < homogeneity - 1.0))
      throw ConfigError("resonance: requires 0 < delta < d - 1 (homogeneity degree)");
    if (!(mu > 0.0)) throw ConfigError("resonance: requires mu > 0");
    if (!(radius > 0.0)) throw ConfigError("resonance: requires R > 0");
  }
};

// Default parameters for a model: delta = (d-1)/2, mu = 1/4, R = 8.
inline ResonanceParams default_resonance(const GiqsModel& m) {
  return {0.5 * (m.homogeneity - 1.0), 0.25, 8.0};
}

// a is resonant with k iff |w(a).k| < |a|^delta |k|, |k| <= |a|^mu, |a| >= R.
inline bool is_resonant(const GiqsModel& m, const ActionPoint& a, const VecI& k,
                        const ResonanceParams& p) {
  if (a.norm < p.radius) return false;
  double kn = k.cast<double>().norm();
  if (kn == 0.0 || kn > std::pow(a.norm, p.mu)) return false;
  double wk = m.w(a.point).dot(k.cast<double>());
  return std::abs(wk) < std::pow(a.norm, p.delta) * kn;
}

// Same test with the gradient precomputed (hot loops).
inline bool is_resonant_cached(const VecD& w, double a_norm, const VecI& k,
                               const ResonanceParams& p) {
  if (a_norm < p.radius) return false;
  double kn = k.cast<double>().norm();
  if (kn == 0.0 || kn > std::pow(a_norm, p.mu)) return false;
  double wk = w.dot(k.cast<double>());
  return std::abs(wk) < std::pow(a_norm, p.delta) * kn;
}

// All nonzero integer vectors with |k| <= c, lexicographic.
inline std::vector<VecI> integer_ball(int d, double c, long budget_count = 20000000) {
  int m = static_cast<int>(std::floor(c));
  double box = std::pow(2.0 * m + 1.0, d);
  if (box > static_cast<double>(budget_count))
    throw BudgetError("integer_ball: enumeration budget exceeded");
  std::vector<VecI> out;
  VecI k = VecI::Constant(d, -m);
  double c2 = c * c;
  while (true) {
    double n2 = k.cast<double>().squaredNorm();
    if (n2 > 0.0 && n2 <= c2) out.push_back(k);
    int i = d - 1;
    while (i >= 0 && k[i] == m) {
      k[i] = -m;
      --i;
    }
    if (i < 0) break;
    ++k[i];
  }
  return out;
}

struct ResonanceModule {
  int rank = 0;
  IntMat basis;  // rank x d, canonical HNF rows
  bool saturated = true;

  friend bool operator==(const ResonanceModule& a, const ResonanceModule& b) {
    return a.rank == b.rank && a.basis == b.basis;
  }
};

inline ResonanceModule module_from_vectors(const std::vector<VecI>& ks, int d) {
  ResonanceModule mod;
  if (ks.empty()) {
    mod.basis = IntMat(0, d);
    return mod;
  }
  IntMat a(static_cast<int>(ks.size()), d);
  for (size_t i = 0; i < ks.size(); ++i)
    for (int j = 0; j < d; ++j) a(static_cast<int>(i), j) = ks[i][j];
  mod.basis = saturate_rows(a);
  mod.rank = static_cast<int>(mod.basis.rows());
  return mod;
}

// The resonant vectors of a within the cutoff |k| <= |a|^mu.
inline std::vector<VecI> resonant_vectors(const GiqsModel& m, const ActionPoint& a,
                                          const ResonanceParams& p) {
  std::vector<VecI> out;
  if (a.norm < p.radius) return out;
  VecD w = m.w(a.point);
  double thr = std::pow(a.norm, p.delta);
  for (const VecI& k : integer_ball(m.d, std::pow(a.norm, p.mu))) {
    double kn = k.cast<double>().norm();
    if (std::abs(w.dot(k.cast<double>())) < thr * kn) out.push_back(k);
  }
  return out;
}

// Saturation of the set of resonance vectors of a; rank 0 when empty.
inline ResonanceModule resonance_module(const GiqsModel& m, const ActionPoint& a,
                                        const ResonanceParams& p) {
  return module_from_vectors(resonant_vectors(m, a, p), m.d);
}

}  // namespace giqs
