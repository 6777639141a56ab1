#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "giqs/common.hpp"

namespace giqs {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  f.n = static_cast<int>(x.size());
  if (f.n < 2) return f;
  double sx = 0, sy = 0;
  for (int i = 0; i < f.n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / f.n, my = sy / f.n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < f.n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (int i = 0; i < f.n; ++i) {
    double e = y[i] - (f.intercept + f.slope * x[i]);
    ssr += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - ssr / syy : 1.0;
  return f;
}

// Power-law fit y ~ B * x^alpha in log-log coordinates.
inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  lx.reserve(x.size());
  ly.reserve(y.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_line(lx, ly);
}

// Binned log-log fit: bins equally spaced in log x, per-bin median of log y
// against per-bin mean of log x. Robust against heavy scatter of pointwise
// values (residual clouds); the R^2 refers to the binned points.
struct BinnedFit {
  LineFit fit;
  std::vector<double> bin_x, bin_y;  // log-space bin coordinates
  int n_raw = 0;
};

inline BinnedFit fit_loglog_binned(const std::vector<double>& x, const std::vector<double>& y,
                                   int n_bins, int min_per_bin = 3) {
  BinnedFit out;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  out.n_raw = static_cast<int>(lx.size());
  if (out.n_raw < 2 * min_per_bin || n_bins < 2) return out;
  double lo = *std::min_element(lx.begin(), lx.end());
  double hi = *std::max_element(lx.begin(), lx.end()) + 1e-12;
  double w = (hi - lo) / n_bins;
  if (w <= 0) return out;
  std::vector<std::vector<double>> bx(n_bins), by(n_bins);
  for (size_t i = 0; i < lx.size(); ++i) {
    int b = std::min(n_bins - 1, static_cast<int>((lx[i] - lo) / w));
    bx[b].push_back(lx[i]);
    by[b].push_back(ly[i]);
  }
  for (int b = 0; b < n_bins; ++b) {
    if (static_cast<int>(bx[b].size()) < min_per_bin) continue;
    double mx = 0;
    for (double v : bx[b]) mx += v;
    mx /= bx[b].size();
    std::sort(by[b].begin(), by[b].end());
    size_t m = by[b].size();
    double med = (m % 2 == 1) ? by[b][m / 2] : 0.5 * (by[b][m / 2 - 1] + by[b][m / 2]);
    out.bin_x.push_back(mx);
    out.bin_y.push_back(med);
  }
  out.fit = fit_line(out.bin_x, out.bin_y);
  return out;
}

}  // namespace giqs
