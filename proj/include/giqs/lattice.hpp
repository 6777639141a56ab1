#pragma once

#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "giqs/anharmonic.hpp"
#include "giqs/common.hpp"
#include "giqs/rational.hpp"

namespace giqs {

// A point of the joint spectrum Lambda subset (Z^d + kappa) cap C.
// The integer index is the identity of the point; the real coordinates and
// the Euclidean norm are cached.
struct ActionPoint {
  VecI index;
  VecD point;
  double norm = 0.0;

  friend bool operator==(const ActionPoint& a, const ActionPoint& b) {
    return a.index == b.index;
  }
};

inline bool lex_less(const VecI& a, const VecI& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

struct Cone {
  std::string name;
  std::function<bool(const VecD&)> contains;
};

inline Cone full_cone() {
  return {"full", [](const VecD&) { return true; }};
}

inline Cone half_line_cone() {
  return {"half-line", [](const VecD& a) { return a[0] >= 0.0; }};
}

inline Cone orthant_cone() {
  return {"orthant", [](const VecD& a) {
            for (int i = 0; i < a.size(); ++i)
              if (a[i] < 0.0) return false;
            return true;
          }};
}

// Half-plane pair for the anharmonic actions: a1 >= 0 if a2 >= 0,
// a1 >= |a2| if a2 < 0. Equivalent to {a1 >= 0} cap {a1 + a2 >= 0}.
inline Cone anharmonic_cone() {
  return {"anharmonic", [](const VecD& a) { return a[0] >= 0.0 && a[0] + a[1] >= 0.0; }};
}

struct LieGroupParams {
  MatD weights;  // rows are the fundamental weights f_1..f_d
};

struct SphereParams {
  int n = 2;  // dimension of the sphere
};

// A globally integrable quantum system at the level the toolkit needs:
// the action lattice, h_L and its gradient, multiplicities and the
// Sobolev weight. All closures are pure; instances are immutable after
// construction and safe to share.
struct GiqsModel {
  std::string kind;
  int d = 1;
  VecD kappa;
  Cone cone;
  double homogeneity = 2.0;   // degree of h_L at infinity
  double r_hom = 0.0;         // exactly homogeneous beyond this radius
  double min_eval_radius = 0.0;

  std::function<double(const VecD&)> h;
  std::function<VecD(const VecD&)> w;
  std::function<int(const ActionPoint&)> mult;
  std::function<double(const ActionPoint&)> k0;

  // exact eigenvalues, available when the metric is rational (torus)
  std::function<Rational(const VecI&)> omega_exact;
  bool has_exact_omega = false;

  ActionPoint make_point(const VecI& index) const {
    ActionPoint p;
    p.index = index;
    p.point = index.cast<double>() + kappa;
    p.norm = p.point.norm();
    return p;
  }
};

inline void check_in_domain(const GiqsModel& m, const VecD& a) {
  if (!m.cone.contains(a)) throw DomainError(m.kind + ": point outside the model cone");
  if (a.norm() < m.min_eval_radius)
    throw DomainError(m.kind + ": point below the regularization radius");
}

// omega_a = h_L(a)
inline double h_value(const GiqsModel& m, const VecD& a) {
  check_in_domain(m, a);
  return m.h(a);
}

inline VecD gradient_w(const GiqsModel& m, const VecD& a) {
  check_in_domain(m, a);
  return m.w(a);
}

inline int multiplicity(const GiqsModel& m, const ActionPoint& a) { return m.mult(a); }

inline double enumeration_budget_mb() {
  if (const char* env = std::getenv("GIQS_BUDGET_MB")) {
    double v = std::atof(env);
    if (v > 0) return v;
  }
  return 512.0;
}

// All points of (Z^d + kappa) cap C with r_min <= |a| <= r_max, in
// lexicographic order of the integer index. Deterministic.
inline std::vector<ActionPoint> enumerate_lattice(const GiqsModel& m, double r_min, double r_max,
                                                  double budget_mb = enumeration_budget_mb()) {
  if (!(r_min < r_max)) throw DomainError("enumerate_lattice: requires r_min < r_max");
  double box = 1.0;
  for (int i = 0; i < m.d; ++i) box *= 2.0 * std::floor(r_max) + 3.0;
  if (box * (sizeof(ActionPoint) + 16.0 * m.d) > budget_mb * 1048576.0)
    throw BudgetError("enumerate_lattice: box of " + std::to_string(static_cast<long long>(box)) +
                      " candidate points exceeds the memory budget");

  std::vector<int> lo(m.d), hi(m.d);
  for (int i = 0; i < m.d; ++i) {
    lo[i] = static_cast<int>(std::ceil(-r_max - m.kappa[i]));
    hi[i] = static_cast<int>(std::floor(r_max - m.kappa[i]));
  }
  std::vector<ActionPoint> out;
  VecI idx(m.d);
  for (int i = 0; i < m.d; ++i) idx[i] = lo[i];
  double r2min = r_min * r_min, r2max = r_max * r_max;
  while (true) {
    VecD pt = idx.cast<double>() + m.kappa;
    double n2 = pt.squaredNorm();
    if (n2 >= r2min && n2 <= r2max && m.cone.contains(pt)) {
      ActionPoint p;
      p.index = idx;
      p.point = std::move(pt);
      p.norm = std::sqrt(n2);
      out.push_back(std::move(p));
    }
    int k = m.d - 1;
    while (k >= 0 && idx[k] == hi[k]) {
      idx[k] = lo[k];
      --k;
    }
    if (k < 0) break;
    ++idx[k];
  }
  return out;
}

// ---- model catalog -------------------------------------------------------

// Flat torus: h_L(a) = sum g^{ij} a_i a_j with a rational coefficient
// matrix, so eigenvalues are exact rationals.
inline GiqsModel make_torus(int d, const std::vector<std::vector<Rational>>& metric) {
  if (static_cast<int>(metric.size()) != d) throw ConfigError("torus: metric must be d x d");
  for (const auto& row : metric)
    if (static_cast<int>(row.size()) != d) throw ConfigError("torus: metric must be d x d");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (metric[i][j] != metric[j][i]) throw ConfigError("torus: metric must be symmetric");

  MatD G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = metric[i][j].to_double();
  Eigen::SelfAdjointEigenSolver<MatD> es(G);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ConfigError("torus: metric must be positive definite");

  GiqsModel m;
  m.kind = "torus";
  m.d = d;
  m.kappa = VecD::Zero(d);
  m.cone = full_cone();
  m.homogeneity = 2.0;
  m.h = [G](const VecD& a) { return a.dot(G * a); };
  m.w = [G](const VecD& a) -> VecD { return 2.0 * (G * a); };
  m.mult = [](const ActionPoint&) { return 1; };
  auto h = m.h;
  m.k0 = [h](const ActionPoint& a) { return std::sqrt(1.0 + h(a.point)); };
  m.has_exact_omega = true;
  m.omega_exact = [metric, d](const VecI& idx) {
    Rational acc(0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        acc = acc + metric[i][j] * Rational(idx[i]) * Rational(idx[j]);
    return acc;
  };
  return m;
}

inline GiqsModel make_torus_identity(int d) {
  std::vector<std::vector<Rational>> g(d, std::vector<Rational>(d, Rational(0)));
  for (int i = 0; i < d; ++i) g[i][i] = Rational(1);
  return make_torus(d, g);
}

// Free particle on S^n: one action a = j + (n-1)/2 with h_L(a) = a^2 and
// the spherical-harmonic multiplicities.
inline GiqsModel make_sphere(int n) {
  if (n < 2) throw ConfigError("sphere: requires n >= 2");
  GiqsModel m;
  m.kind = "sphere";
  m.d = 1;
  m.kappa = VecD::Constant(1, 0.5 * (n - 1));
  m.cone = half_line_cone();
  m.homogeneity = 2.0;
  m.h = [](const VecD& a) { return a[0] * a[0]; };
  m.w = [](const VecD& a) -> VecD { return 2.0 * a; };
  m.mult = [n](const ActionPoint& a) {
    long j = a.index[0];
    if (j < 0) throw DomainError("sphere: negative harmonic degree");
    if (j == 0) return 1L;
    // dim of degree-j harmonics on S^n: C(j+n, n) - C(j+n-2, n)
    auto binom = [](long t, int k) {
      double v = 1.0;
      for (int i = 1; i <= k; ++i) v *= static_cast<double>(t - k + i) / i;
      return static_cast<long>(std::llround(v));
    };
    return binom(j + n, n) - binom(j + n - 2, n);
  };
  double shift2 = 0.25 * (n - 1.0) * (n - 1.0);
  m.k0 = [shift2](const ActionPoint& a) {
    return std::sqrt(1.0 + std::max(0.0, a.point[0] * a.point[0] - shift2));
  };
  double kap = m.kappa[0];
  m.has_exact_omega = true;
  // exact when 2*kappa is an integer: a^2 = j^2 + j(n-1) + (n-1)^2/4
  m.omega_exact = [kap](const VecI& idx) {
    long twok = std::lround(2.0 * kap);
    Rational a2(2 * idx[0] + twok, 2);
    return a2 * a2;
  };
  return m;
}

// Laplacian on a compact simply connected Lie group, as the quadratic form
// of the fundamental weights: h_L(a) = a^T Gram(f) a, -Delta_g = h_L(A) - F.
inline GiqsModel make_lie(const LieGroupParams& params) {
  const int d = static_cast<int>(params.weights.rows());
  if (d < 1 || params.weights.cols() != d)
    throw ConfigError("lie: weights must be a square d x d matrix of row vectors");
  MatD gram = params.weights * params.weights.transpose();
  Eigen::FullPivLU<MatD> lu(params.weights);
  if (lu.rank() < d) throw ConfigError("lie: fundamental weights must be linearly independent");
  double F = gram.sum();

  GiqsModel m;
  m.kind = "lie";
  m.d = d;
  m.kappa = VecD::Zero(d);
  m.cone = orthant_cone();
  m.homogeneity = 2.0;
  m.min_eval_radius = 0.0;
  m.h = [gram](const VecD& a) { return a.dot(gram * a); };
  m.w = [gram](const VecD& a) -> VecD { return 2.0 * (gram * a); };
  m.mult = [](const ActionPoint&) { return 1; };
  auto h = m.h;
  m.k0 = [h, F](const ActionPoint& a) {
    return std::sqrt(1.0 + std::max(0.0, h(a.point) - F));
  };
  return m;
}

inline GiqsModel make_su2() {
  LieGroupParams p;
  p.weights = MatD::Constant(1, 1, 0.5);  // |f_1|^2 = 1/4
  return make_lie(p);
}

// Anharmonic oscillator on R^2: h_L is the inversion of the regularized
// action map, homogeneous of degree 2l/(l+1). kappa is configurable; the
// default (1/2, 0) is a toolkit choice.
inline GiqsModel make_anharmonic(const AnharmonicParams& params,
                                 std::optional<VecD> kappa = std::nullopt) {
  if (params.ell < 1) throw ConfigError("anharmonic: requires ell >= 1");
  GiqsModel m;
  m.kind = "anharmonic";
  m.d = 2;
  m.kappa = kappa.value_or((VecD(2) << 0.5, 0.0).finished());
  m.cone = anharmonic_cone();
  m.homogeneity = 2.0 * params.ell / (params.ell + 1.0);
  m.min_eval_radius = 1.0;
  m.h = [params](const VecD& a) { return invert_actions(params, a[0], a[1]); };
  auto h = m.h;
  m.w = [h](const VecD& a) -> VecD {
    // centered finite differences of the inverted energy
    const double step = 1e-5 * std::max(1.0, a.norm());
    VecD g(2);
    for (int i = 0; i < 2; ++i) {
      VecD ap = a, am = a;
      ap[i] += step;
      am[i] -= step;
      g[i] = (h(ap) - h(am)) / (2.0 * step);
    }
    return g;
  };
  m.mult = [](const ActionPoint&) { return 1; };
  double expo = (params.ell + 1.0) / (2.0 * params.ell);
  m.k0 = [h, expo](const ActionPoint& a) {
    if (a.norm < 1.0) return jbracket(a.norm);
    return std::pow(1.0 + h(a.point), expo);
  };
  return m;
}

}  // namespace giqs
