#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace citl {

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double max_residual = 0;  // max |log y - fit| over points
  int n = 0;
};

/// Least-squares slope of log(y) against log(x).
inline FitResult fit_loglog(const std::vector<double>& xs,
                            const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_loglog: need >= 2 matching points");
  const int n = int(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0))
      throw std::invalid_argument("fit_loglog: positive data required");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  FitResult r;
  r.n = n;
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fit_loglog: degenerate abscissae");
  r.slope = (n * sxy - sx * sy) / denom;
  r.intercept = (sy - r.slope * sx) / n;
  for (int i = 0; i < n; ++i)
    r.max_residual =
        std::max(r.max_residual, std::abs(ly[i] - (r.slope * lx[i] + r.intercept)));
  return r;
}

}  // namespace citl
