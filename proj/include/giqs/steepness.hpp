#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "giqs/fit.hpp"
#include "giqs/lattice.hpp"

namespace giqs {

struct AnnulusDomain {
  double r_lo = 0.5, r_hi = 1.0;
};

struct SteepnessEstimate {
  int s = 1;
  double alpha = 0.0;      // estimated steepness index
  double coeff_B = 0.0;    // estimated coefficient
  double radius = 0.0;     // xi range explored
  double inf_grad = 0.0;   // measured inf |w| over the sampled domain
  bool steep = false;
  std::string verdict;
  int n_points = 0, n_subspaces = 0;
  std::vector<double> xi_grid;
  std::vector<double> envelope;  // lower envelope over samples, per xi
  LineFit fit;
};

namespace detail {

// orthonormal basis of the orthogonal complement of unit v (d-1 columns)
inline MatD orthogonal_complement(const VecD& v) {
  int d = static_cast<int>(v.size());
  Eigen::HouseholderQR<MatD> qr(v);
  MatD q = qr.householderQ();
  return q.rightCols(d - 1);
}

// directions on the unit sphere of an s-dimensional space: both endpoints
// for s = 1, a uniform antipodal circle grid for s = 2, random beyond
inline std::vector<VecD> unit_directions(int s, int n, Rng& rng) {
  std::vector<VecD> out;
  if (s == 1) {
    out.push_back(VecD::Constant(1, 1.0));
    out.push_back(VecD::Constant(1, -1.0));
  } else if (s == 2) {
    for (int i = 0; i < n; ++i) {
      double th = kPi * i / n;
      VecD u(2);
      u << std::cos(th), std::sin(th);
      out.push_back(u);
      out.push_back(-u);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      VecD u = rng.unit_vector(s);
      out.push_back(u);
      out.push_back(-u);
    }
  }
  return out;
}

}  // namespace detail

// The left side of the steepness inequality at one base point and one
// subspace: xi -> max_{0<=eta<=xi} min_{u in M, |u|=1} |P_M w(a + eta u)|,
// evaluated on xi_grid. The inner min samples unit directions of M; eta
// runs over a grid of n_eta points per xi cell. Nondecreasing in xi by
// construction (running max).
inline std::vector<double> steepness_envelope_at(const GiqsModel& m, const VecD& a,
                                                 const MatD& subspace,  // d x s, orthonormal
                                                 const std::vector<double>& xi_grid,
                                                 const std::vector<VecD>& dirs, int n_eta = 24) {
  const double xi_max = xi_grid.back();
  const int total_eta = n_eta * static_cast<int>(xi_grid.size());
  std::vector<double> env(xi_grid.size(), 0.0);
  auto proj_norm = [&](const VecD& x) { return (subspace.transpose() * x).norm(); };
  double running = 0.0;
  size_t k = 0;
  for (int ei = 0; ei < total_eta && k < xi_grid.size(); ++ei) {
    double eta = xi_max * (ei + 1) / total_eta;
    double gmin = std::numeric_limits<double>::infinity();
    for (const VecD& u : dirs) {
      VecD x = a + eta * (subspace * u);
      if (!m.cone.contains(x) || x.norm() < m.min_eval_radius) continue;
      gmin = std::min(gmin, proj_norm(m.w(x)));
    }
    if (std::isfinite(gmin)) running = std::max(running, gmin);
    while (k < xi_grid.size() && xi_grid[k] <= eta + 1e-15) {
      env[k] = running;
      ++k;
    }
  }
  for (; k < xi_grid.size(); ++k) env[k] = running;
  for (size_t i = 1; i < env.size(); ++i)
    if (env[i] < env[i - 1] - 1e-12) throw NumericError("steepness envelope not monotone");
  return env;
}

// Steepness index/coefficient estimate on subspace dimension s: samples base
// points in the annulus and subspaces M orthogonal to w(a), accumulates the
// lower envelope, and fits it as B_s xi^alpha_s in log-log.
inline SteepnessEstimate steepness_profile(const GiqsModel& m, const AnnulusDomain& dom, int s,
                                           int n_points, int n_subspaces,
                                           std::vector<double> xi_grid, std::uint64_t seed = 1) {
  if (s < 1 || s > m.d - 1) throw DomainError("steepness_profile: requires 1 <= s <= d-1");
  if (xi_grid.empty()) throw DomainError("steepness_profile: empty xi grid");
  std::sort(xi_grid.begin(), xi_grid.end());
  SteepnessEstimate est;
  est.s = s;
  est.n_points = n_points;
  est.n_subspaces = n_subspaces;
  est.xi_grid = xi_grid;
  est.radius = xi_grid.back();
  est.envelope.assign(xi_grid.size(), std::numeric_limits<double>::infinity());
  est.inf_grad = std::numeric_limits<double>::infinity();

  Rng rng = Rng(seed).split("steepness");
  const int n_dirs = 16;

  int accepted = 0, attempts = 0;
  while (accepted < n_points && attempts < 100 * n_points) {
    ++attempts;
    VecD a = rng.unit_vector(m.d) * rng.uniform(dom.r_lo, dom.r_hi);
    if (!m.cone.contains(a) || a.norm() < m.min_eval_radius) continue;
    VecD wa;
    try {
      wa = m.w(a);
    } catch (const DomainError&) {
      continue;
    }
    ++accepted;
    est.inf_grad = std::min(est.inf_grad, wa.norm());
    if (wa.norm() < 1e-14) continue;

    MatD comp = detail::orthogonal_complement(wa / wa.norm());
    for (int sub = 0; sub < n_subspaces; ++sub) {
      MatD basis;
      if (s == m.d - 1) {
        basis = comp;
      } else {
        MatD g(m.d - 1, s);
        for (int i = 0; i < g.rows(); ++i)
          for (int j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
        Eigen::HouseholderQR<MatD> qr(g);
        basis = comp * MatD(qr.householderQ()).leftCols(s);
      }
      std::vector<VecD> dirs = detail::unit_directions(s, n_dirs, rng);
      std::vector<double> env = steepness_envelope_at(m, a, basis, xi_grid, dirs);
      for (size_t k = 0; k < xi_grid.size(); ++k)
        est.envelope[k] = std::min(est.envelope[k], env[k]);
    }
  }
  if (accepted == 0) throw DomainError("steepness_profile: empty sampling domain");

  if (!(est.inf_grad > 1e-10)) {
    est.verdict = "not steep: vanishing gradient";
    return est;
  }
  double env_max = *std::max_element(est.envelope.begin(), est.envelope.end());
  const double floor = 1e-9 * std::max(1.0, est.inf_grad);
  if (!(env_max > floor)) {
    est.verdict = "not steep: degenerate envelope";
    return est;
  }
  std::vector<double> xs, ys;
  for (size_t k = 0; k < xi_grid.size(); ++k) {
    if (est.envelope[k] > floor && xi_grid[k] >= 0.1 * est.radius) {
      xs.push_back(xi_grid[k]);
      ys.push_back(est.envelope[k]);
    }
  }
  est.fit = fit_loglog(xs, ys);
  est.alpha = est.fit.slope;
  est.coeff_B = std::exp(est.fit.intercept);
  est.steep = est.fit.n >= 3 && est.alpha >= 0.5;
  est.verdict = est.steep ? "steep" : "not steep: envelope fit failed";
  return est;
}

struct CriticalSegment {
  double t_begin = 0.0, t_end = 0.0;
  int n_samples = 0;
};

struct NiedermanLine {
  VecD origin, direction;
  double t_lo = 0.0, t_hi = 0.0;
  std::vector<CriticalSegment> segments;
  bool pass = true;
};

struct NiedermanReport {
  int n_lines = 0;
  std::vector<NiedermanLine> lines;
  bool pass = true;
  int isolation_samples = 3;  // a run of >= this many samples is non-isolated
};

// One affine line: finite-difference derivative of the restriction;
// contiguous runs below the threshold are critical segments. Pass iff all
// runs are shorter than the isolation threshold.
inline NiedermanLine scan_line(const GiqsModel& m, const VecD& origin, const VecD& direction,
                               double t_lo, double t_hi, int n_samples, double zero_threshold,
                               int isolation = 3) {
  NiedermanLine line;
  line.origin = origin;
  line.direction = direction;
  line.t_lo = t_lo;
  line.t_hi = t_hi;
  std::vector<double> ts(n_samples), hs(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    ts[i] = t_lo + (t_hi - t_lo) * i / (n_samples - 1);
    hs[i] = m.h(origin + ts[i] * direction);
  }
  int run = 0;
  double run_start = 0.0;
  auto close_run = [&](int endi) {
    if (run > 0) {
      line.segments.push_back({run_start, ts[endi], run});
      if (run >= isolation) line.pass = false;
    }
    run = 0;
  };
  for (int i = 0; i + 1 < n_samples; ++i) {
    double deriv = (hs[i + 1] - hs[i]) / (ts[i + 1] - ts[i]);
    if (std::abs(deriv) < zero_threshold) {
      if (run == 0) run_start = ts[i];
      ++run;
    } else {
      close_run(i);
    }
  }
  close_run(n_samples - 1);
  return line;
}

// Niederman's analytic criterion by sampling: the restriction of h_L to
// random affine lines must admit only isolated critical points.
inline NiedermanReport niederman_check(const GiqsModel& m, const AnnulusDomain& dom, int n_lines,
                                       int n_samples_per_line, double zero_threshold,
                                       std::uint64_t seed = 1) {
  if (!(zero_threshold > 0)) throw DomainError("niederman_check: threshold must be positive");
  NiedermanReport rep;
  rep.n_lines = n_lines;
  Rng rng = Rng(seed).split("niederman");
  int made = 0, attempts = 0;
  while (made < n_lines && attempts < 200 * n_lines) {
    ++attempts;
    VecD a = rng.unit_vector(m.d) * rng.uniform(dom.r_lo, dom.r_hi);
    if (!m.cone.contains(a) || a.norm() < m.min_eval_radius) continue;
    VecD v = rng.unit_vector(m.d);
    double span = 0.5 * (dom.r_hi - dom.r_lo);
    double t_lo = -span, t_hi = span;
    auto ok = [&](double t) {
      VecD x = a + t * v;
      double r = x.norm();
      return m.cone.contains(x) && r >= std::max(m.min_eval_radius, 0.5 * dom.r_lo) &&
             r <= 1.5 * dom.r_hi;
    };
    while (t_hi > 0 && !ok(t_hi)) t_hi *= 0.75;
    while (t_lo < 0 && !ok(t_lo)) t_lo *= 0.75;
    if (t_hi - t_lo < 0.2 * span) continue;  // line leaves the domain immediately
    bool inside = true;
    for (int i = 0; i <= 8; ++i)
      if (!ok(t_lo + (t_hi - t_lo) * i / 8.0)) inside = false;
    if (!inside) continue;
    NiedermanLine line = scan_line(m, a, v, t_lo, t_hi, n_samples_per_line, zero_threshold,
                                   rep.isolation_samples);
    rep.pass = rep.pass && line.pass;
    rep.lines.push_back(std::move(line));
    ++made;
  }
  if (made < n_lines) throw NumericError("niederman_check: could not place the requested lines");
  return rep;
}

}  // namespace giqs
