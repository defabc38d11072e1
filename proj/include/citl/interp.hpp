#pragma once

#include <array>

#include "citl/field.hpp"

namespace citl {

/// Periodic quintic B-spline interpolant of samples on a uniform n^d grid
/// over the unit cell. Coefficients are tabulated once (FFT prefilter); C^4
/// smooth evaluations, so compositions can be differentiated afterwards.
class SpatialInterpolant {
 public:
  SpatialInterpolant() = default;
  SpatialInterpolant(int d, int n, const Vec& samples);

  double eval(const std::array<double, 3>& y) const;

  int dim() const { return d_; }
  int n() const { return n_; }

 private:
  int d_ = 0, n_ = 0;
  Vec coef_;
};

/// Space-time interpolant of a (vector) field: quintic B-spline in space per
/// time sample, 6-point Lagrange across time samples. Detects time-constant
/// fields and skips the time stage for them.
class SpaceTimeInterpolant {
 public:
  explicit SpaceTimeInterpolant(const SpaceTimeField& f);

  /// Evaluate all components at (t, y); y in unit-cell coordinates (any real,
  /// wrapped periodically), t clamped to [0,1].
  void eval(double t, const std::array<double, 3>& y, double* out) const;

  int rank() const { return rank_; }
  bool steady() const { return steady_; }

 private:
  Grid grid_;
  int rank_ = 0;
  bool steady_ = false;
  std::vector<SpatialInterpolant> slices_;  // [k * rank + c], or [c] if steady
};

}  // namespace citl
