#pragma once

#include <cmath>
#include <vector>

namespace citl {

/// Geometric step-size schedule: delta_n = c 4^{-n} normalized so
/// sum_{n=2..n_max} delta_n^{1/2} = 1, and eta_n tied to delta_n through
/// delta_n^{1/p} eta_n = eps delta_n^{1/2} / (2M). eta_1 depends on the first
/// defect and is computed at run time.
struct Schedule {
  double eps = 0.1;
  double M = 1;
  double p = 2;
  int n_max = 3;
  std::vector<double> delta;  // indexed by n, entries valid for 2 <= n <= n_max
  std::vector<double> eta;    // same indexing

  double sum_sqrt_delta() const {
    double acc = 0;
    for (int n = 2; n <= n_max; ++n) acc += std::sqrt(delta[n]);
    return acc;
  }
  double eta1(double r1_l1) const {
    return eps / (2.0 * M * std::pow(r1_l1, 1.0 / p));
  }
};

inline Schedule build_schedule(double eps, double p, double M, int n_max) {
  if (!(eps > 0) || n_max < 2)
    throw std::invalid_argument("build_schedule: eps > 0, n_max >= 2");
  Schedule s;
  s.eps = eps;
  s.M = M;
  s.p = p;
  s.n_max = n_max;
  double geom = 0;
  for (int n = 2; n <= n_max; ++n) geom += std::pow(2.0, -n);
  double c = 1.0 / (geom * geom);
  s.delta.assign(n_max + 1, 0.0);
  s.eta.assign(n_max + 1, 0.0);
  for (int n = 2; n <= n_max; ++n) {
    s.delta[n] = c * std::pow(4.0, -n);
    s.eta[n] = eps * std::pow(s.delta[n], 0.5 - 1.0 / p) / (2.0 * M);
  }
  return s;
}

}  // namespace citl
