#pragma once

#include <cmath>
#include <map>
#include <utility>

#include "giqs/common.hpp"

namespace giqs {

// Action-angle machinery for the planar anharmonic oscillator
// h(x,xi) = |xi|^2/2 + |x|^(2l)/(2l). Actions are the angular momentum Mz
// and the radial action a_r; the energy as a function of the regularized
// actions (a1, a2) is recovered by monotone inversion of a_r in E.

struct AnharmonicParams {
  int ell = 2;                    // l >= 1
  int quad_nodes = 48;            // Gauss-Legendre nodes per panel
  double turning_tol = 1e-13;     // bisection tolerance for turning points
  double invert_tol = 1e-11;      // relative tolerance of the E-inversion
};

namespace detail {

// Gauss-Legendre nodes/weights on [0,1], computed once per node count by
// Newton iteration on P_n. Deterministic.
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (t * p0 - p1) / (t * t - 1.0);
        double dt = p0 / pp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      x[i] = 0.5 * (1.0 - t);  // reversed so nodes increase
      w[i] = 1.0 / ((1.0 - t * t) * pp * pp);
    }
  }
};

inline const GaussLegendre& gl_rule(int n) {
  static thread_local std::map<int, GaussLegendre> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
  return it->second;
}

}  // namespace detail

// V*_M(r) = M^2/(2 r^2) + r^(2l)/(2l)
inline double effective_potential(const AnharmonicParams& p, double r, double Mz) {
  return 0.5 * Mz * Mz / (r * r) + std::pow(r, 2 * p.ell) / (2.0 * p.ell);
}

// Smallest admissible energy at angular momentum Mz (the circular orbit).
inline double circular_energy(const AnharmonicParams& p, double Mz) {
  if (Mz == 0.0) return 0.0;
  double l = p.ell;
  return (l + 1.0) / (2.0 * l) * std::pow(std::abs(Mz), 2.0 * l / (l + 1.0));
}

// Turning points r_m < r_M of E - V*_M(r) = 0. V* is unimodal with minimum
// at r* = |M|^(1/(l+1)); brackets expand by doubling on each side.
inline std::pair<double, double> turning_points(const AnharmonicParams& p, double E, double Mz) {
  double l = p.ell;
  if (Mz == 0.0) {
    if (E <= 0.0) throw DomainError("turning_points: E must be positive for Mz = 0");
    return {0.0, std::pow(2.0 * l * E, 1.0 / (2.0 * l))};
  }
  if (E < circular_energy(p, Mz))
    throw DomainError("turning_points: (E, Mz) outside the admissible region");
  double rstar = std::pow(std::abs(Mz), 1.0 / (l + 1.0));
  if (E == circular_energy(p, Mz)) return {rstar, rstar};

  auto f = [&](double r) { return E - effective_potential(p, r, Mz); };
  // inner bracket
  double lo = rstar;
  while (f(lo) > 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) throw NumericError("turning_points: inner bracket failed");
  }
  double hi = rstar;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
    if (hi - lo < p.turning_tol * rstar) break;
  }
  double rm = 0.5 * (lo + hi);
  // outer bracket
  lo = rstar;
  hi = rstar * 2.0;
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e150) throw NumericError("turning_points: outer bracket failed");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
    if (hi - lo < p.turning_tol * std::max(1.0, rstar)) break;
  }
  double rM = 0.5 * (lo + hi);
  return {rm, rM};
}

namespace detail {

// One panel [a, b] of the radial integrand after the substitution
// r = a + (b - a) sin^2(theta). The map regularizes the sqrt behavior at
// the turning points and is harmless on interior panels.
inline double radial_panel(const AnharmonicParams& p, double E, double Mz, double a, double b,
                           int n) {
  const GaussLegendre& gl = gl_rule(n);
  double width = b - a;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double th = 0.5 * kPi * gl.x[i];
    double s = std::sin(th), c = std::cos(th);
    double r = a + width * s * s;
    double val = E - effective_potential(p, r, Mz);
    if (val < 0.0) val = 0.0;
    acc += gl.w[i] * std::sqrt(val) * 2.0 * width * s * c;
  }
  return 0.5 * kPi * acc;
}

// Adaptive bisection with a node-doubling error check per panel. Small |Mz|
// produces a boundary layer of width ~ r_m at the inner turning point which
// a single panel cannot resolve.
inline double radial_adaptive(const AnharmonicParams& p, double E, double Mz, double a, double b,
                              double abs_tol, int depth) {
  double v1 = radial_panel(p, E, Mz, a, b, p.quad_nodes);
  double v2 = radial_panel(p, E, Mz, a, b, 2 * p.quad_nodes);
  if (std::abs(v2 - v1) <= abs_tol) return v2;
  if (depth >= 30) throw NumericError("radial_action: quadrature did not converge");
  double mid = 0.5 * (a + b);
  return radial_adaptive(p, E, Mz, a, mid, 0.5 * abs_tol, depth + 1) +
         radial_adaptive(p, E, Mz, mid, b, 0.5 * abs_tol, depth + 1);
}

}  // namespace detail

// a_r(E, M) = (sqrt(2)/pi) * int_{r_m}^{r_M} sqrt(E - V*_M(r)) dr
inline double radial_action(const AnharmonicParams& p, double E, double Mz) {
  double l = p.ell;
  if (E <= 0.0) throw DomainError("radial_action: E must be positive");
  if (std::abs(Mz) >= std::pow(2.0 * l * E / (l + 1.0), (l + 1.0) / (2.0 * l)))
    throw DomainError("radial_action: |Mz| outside the admissible region");
  auto [rm, rM] = turning_points(p, E, Mz);
  if (rM - rm <= 0.0) return 0.0;
  double scale = std::max(1.0, std::sqrt(E) * (rM - rm));
  double acc = detail::radial_adaptive(p, E, Mz, rm, rM, 1e-11 * scale, 0);
  return std::sqrt(2.0) / kPi * acc;
}

// a1(E, M): a_r for M > 0, a_r - M for M < 0, common limit at M = 0.
// The unimodular shift removes the |M| kink so a1 is smooth across M = 0.
inline double regularized_action_a1(const AnharmonicParams& p, double E, double Mz) {
  double ar = radial_action(p, E, Mz);
  return Mz < 0.0 ? ar - Mz : ar;
}

// E such that a1(E, a2) = a1; this is h_L for the anharmonic model.
// a_r is strictly increasing in E, so plain bisection with a doubling
// upper bracket.
inline double invert_actions(const AnharmonicParams& p, double a1, double a2) {
  double target_ar = a2 < 0.0 ? a1 + a2 : a1;  // a1 = a_r - M for M < 0
  if (target_ar < 0.0) throw DomainError("invert_actions: point outside the action cone");
  double Elo = circular_energy(p, a2);
  if (target_ar == 0.0) return Elo;
  double Ehi = std::max(2.0 * Elo, 1.0);
  auto ar_of = [&](double E) { return radial_action(p, E, a2); };
  int guard = 0;
  while (ar_of(Ehi) < target_ar) {
    Ehi *= 2.0;
    if (++guard > 300) throw NumericError("invert_actions: bracket expansion failed");
  }
  double lo = Elo, hi = Ehi;
  for (int it = 0; it < 300; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= Elo) mid = std::nextafter(Elo, hi);
    (ar_of(mid) < target_ar ? lo : hi) = mid;
    if (hi - lo <= p.invert_tol * std::max(1.0, hi)) return 0.5 * (lo + hi);
  }
  throw NumericError("invert_actions: bisection did not reach tolerance");
}

}  // namespace giqs
