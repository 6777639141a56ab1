#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "giqs/lattice.hpp"
#include "giqs/rational.hpp"

namespace giqs {

// Spectral clustering of h_L(Lambda): intervals [alpha_n, beta_n] with
// widths <= 2 and gaps alpha_n - beta_{n-1} >= 2 n^{-d/hom} (gap index n
// counted 1-based; the n = 0 bound of the lemma is vacuous).
struct SpectralCluster {
  std::vector<double> alpha, beta;
  std::vector<double> omegas;       // sorted distinct eigenvalues covered
  std::vector<int> omega_cluster;   // cluster index per omega
  std::vector<int> gap_violations;  // gap indices where the greedy bound failed
  double gap_exponent = 1.0;        // d/hom

  int size() const { return static_cast<int>(alpha.size()); }

  double required_gap(int n) const {  // bound below cluster n (n >= 1)
    return 2.0 * std::pow(static_cast<double>(n), -gap_exponent);
  }

  // cluster containing omega; nullopt if uncovered
  std::optional<int> find(double omega) const {
    auto it = std::upper_bound(alpha.begin(), alpha.end(), omega);
    if (it == alpha.begin()) return std::nullopt;
    int n = static_cast<int>(it - alpha.begin()) - 1;
    if (omega <= beta[n] + 1e-12 * std::max(1.0, std::abs(beta[n]))) return n;
    return std::nullopt;
  }

  bool has_violations() const { return !gap_violations.empty(); }
};

inline SpectralCluster cluster_values(std::vector<double> values, int d, double hom) {
  SpectralCluster c;
  c.gap_exponent = d / hom;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  c.omegas = values;
  c.omega_cluster.resize(values.size());
  if (values.empty()) return c;

  double cur_alpha = values[0], cur_beta = values[0];
  int cur = 0;
  c.omega_cluster[0] = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    double v = values[i];
    double gap = v - cur_beta;
    bool can_split = gap >= c.required_gap(cur + 1);
    bool fits = (v - cur_alpha) <= 2.0;
    if (can_split || !fits) {
      if (!can_split) c.gap_violations.push_back(cur + 1);  // forced split, bound failed
      c.alpha.push_back(cur_alpha);
      c.beta.push_back(cur_beta);
      cur_alpha = v;
      ++cur;
    }
    cur_beta = v;
    c.omega_cluster[i] = cur;
  }
  c.alpha.push_back(cur_alpha);
  c.beta.push_back(cur_beta);
  return c;
}

// Clusters of all eigenvalues h_L(a) <= E_max. The enumeration radius is
// derived from the smallest value of h_L on the unit sphere of the cone.
inline SpectralCluster build_clusters(const GiqsModel& m, double E_max,
                                      double budget_mb = enumeration_budget_mb()) {
  if (E_max <= 0) throw DomainError("build_clusters: E_max must be positive");
  // sample the unit sphere (within the cone) for the smallest coefficient
  double cmin = std::numeric_limits<double>::infinity();
  Rng rng(12345);
  int found = 0;
  for (int it = 0; it < 4096; ++it) {
    VecD u = rng.unit_vector(m.d);
    for (int s = 0; s < 2; ++s, u = -u) {
      if (!m.cone.contains(u)) continue;
      double hv = m.h(std::max(1.0, m.min_eval_radius) * u) /
                  std::pow(std::max(1.0, m.min_eval_radius), m.homogeneity);
      cmin = std::min(cmin, hv);
      ++found;
    }
  }
  if (found == 0 || !(cmin > 0))
    throw NumericError("build_clusters: could not bound the enumeration radius");
  double r_max = std::pow(E_max / (0.9 * cmin), 1.0 / m.homogeneity) + 1.0;
  std::vector<double> vals;
  for (const ActionPoint& a : enumerate_lattice(m, std::max(0.0, m.min_eval_radius - 1e-12),
                                                r_max, budget_mb)) {
    if (a.norm < m.min_eval_radius) continue;
    double v = m.h(a.point);
    if (v <= E_max) vals.push_back(v);
  }
  return cluster_values(std::move(vals), m.d, m.homogeneity);
}

// Dangerous tuple: r even and the l-th and (l + r/2)-th frequencies share a
// cluster interval for every l.
inline bool is_dangerous(const SpectralCluster& c, const std::vector<double>& omegas) {
  size_t r = omegas.size();
  if (r == 0 || r % 2 != 0) return false;
  for (size_t l = 0; l < r / 2; ++l) {
    auto ca = c.find(omegas[l]);
    auto cb = c.find(omegas[l + r / 2]);
    if (!ca || !cb || *ca != *cb) return false;
  }
  return true;
}

// Dangerous tuples are exempt from the lower bound exactly at the balanced
// split j = r/2.
inline bool melnikov_exempt(bool dangerous, int j, int r) { return dangerous && 2 * j == r; }

struct MelnikovViolation {
  std::vector<int> tuple;  // point indices into the scan's point list
  int split_j = 0;
  double divisor = 0.0;
  double threshold = 0.0;
  bool dangerous = false;
  bool exact_zero = false;  // rational arithmetic certified the zero
};

struct MelnikovReport {
  int order_r = 0;
  double cutoff = 0.0;
  double gamma = 0.0, tau = 0.0;
  std::vector<ActionPoint> points;
  std::vector<double> omega;
  std::vector<MelnikovViolation> violations;
  double min_divisor = std::numeric_limits<double>::infinity();  // over non-exempt splits
  std::vector<int> min_tuple;
  int min_split_j = 0;
  double min_divisor_max3 = 0.0;  // the same divisor, max3-normalized
  long tuples_scanned = 0;

  bool has_violations() const { return !violations.empty(); }
};

namespace detail {

// multisets of given size over {0..n-1}, nondecreasing (kills permutation
// duplicates within one side of the split)
inline void for_each_multiset(int n, int size, std::vector<int>& buf,
                              const std::function<void(const std::vector<int>&)>& f, int from = 0) {
  if (size == 0) {
    f(buf);
    return;
  }
  for (int i = from; i < n; ++i) {
    buf.push_back(i);
    for_each_multiset(n, size - 1, buf, f, i);
    buf.pop_back();
  }
}

}  // namespace detail

// Scan of the 0-th Melnikov condition over r-tuples from Lambda cap B_cutoff.
// Reports every (tuple, split) whose divisor falls below
// gamma / max(|a^(l)|)^tau without the dangerous exemption. Exact rational
// arithmetic is used when the model provides exact eigenvalues.
inline MelnikovReport melnikov_scan(const GiqsModel& m, const SpectralCluster& clusters, int r,
                                    double cutoff, double gamma, double tau,
                                    long tuple_budget = 50000000) {
  if (r < 2) throw DomainError("melnikov_scan: requires r >= 2");
  MelnikovReport rep;
  rep.order_r = r;
  rep.cutoff = cutoff;
  rep.gamma = gamma;
  rep.tau = tau;
  rep.points = enumerate_lattice(m, std::max(0.0, m.min_eval_radius - 1e-12), cutoff);
  const int n = static_cast<int>(rep.points.size());
  rep.omega.resize(n);
  std::vector<Rational> omega_q(m.has_exact_omega ? n : 0);
  for (int i = 0; i < n; ++i) {
    rep.omega[i] = m.h(rep.points[i].point);
    if (m.has_exact_omega) omega_q[i] = m.omega_exact(rep.points[i].index);
  }

  // total tuple count guard
  double total = 0.0;
  for (int j = 1; j <= r; ++j) {
    auto cwr = [](int nn, int kk) {
      double v = 1.0;
      for (int i = 1; i <= kk; ++i) v *= static_cast<double>(nn + i - 1) / i;
      return v;
    };
    total += cwr(n, j) * cwr(n, r - j);
  }
  if (total > static_cast<double>(tuple_budget))
    throw BudgetError("melnikov_scan: tuple enumeration exceeds budget");

  std::vector<double> omegas_buf(r);
  auto consider = [&](const std::vector<int>& left, const std::vector<int>& right) {
    ++rep.tuples_scanned;
    int j = static_cast<int>(left.size());
    double div;
    bool exact_zero = false;
    if (m.has_exact_omega) {
      Rational acc(0);
      for (int i : left) acc = acc + omega_q[i];
      for (int i : right) acc = acc - omega_q[i];
      exact_zero = acc.is_zero();
      div = std::abs(acc.to_double());
    } else {
      double acc = 0.0;
      for (int i : left) acc += rep.omega[i];
      for (int i : right) acc -= rep.omega[i];
      div = std::abs(acc);
    }
    double maxn = 0.0;
    for (int i = 0; i < r; ++i) {
      int idx = i < j ? left[i] : right[i - j];
      omegas_buf[i] = rep.omega[idx];
      maxn = std::max(maxn, rep.points[idx].norm);
    }
    bool dangerous = is_dangerous(clusters, omegas_buf);
    if (melnikov_exempt(dangerous, j, r)) return;
    if (div < rep.min_divisor) {
      rep.min_divisor = div;
      rep.min_tuple = left;
      rep.min_tuple.insert(rep.min_tuple.end(), right.begin(), right.end());
      rep.min_split_j = j;
      std::vector<double> norms;
      for (int i : rep.min_tuple) norms.push_back(rep.points[i].norm);
      std::sort(norms.rbegin(), norms.rend());
      double max3 = norms[std::min<size_t>(2, norms.size() - 1)];
      rep.min_divisor_max3 = div * std::pow(std::max(1.0, max3), tau);
    }
    double threshold = gamma / std::pow(std::max(1e-300, maxn), tau);
    if (div < threshold) {
      MelnikovViolation v;
      v.tuple = left;
      v.tuple.insert(v.tuple.end(), right.begin(), right.end());
      v.split_j = j;
      v.divisor = div;
      v.threshold = threshold;
      v.dangerous = dangerous;
      v.exact_zero = exact_zero;
      rep.violations.push_back(std::move(v));
    }
  };

  std::vector<int> left, right;
  for (int j = 1; j <= r; ++j) {
    detail::for_each_multiset(n, j, left, [&](const std::vector<int>& l) {
      detail::for_each_multiset(n, r - j, right,
                                [&](const std::vector<int>& rr) { consider(l, rr); });
    });
  }
  return rep;
}

}  // namespace giqs
