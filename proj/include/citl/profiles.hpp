#pragma once

#include <functional>

namespace citl {

/// C^inf monotone step 0 -> 1 over [0,1]. Derivative exp(-1/(y(1-y))) (up to
/// normalization) is in closed form; values come from a one-time cumulative
/// table with Hermite interpolation at ~1e-14 accuracy.
struct Smoothstep {
  static double value(double y);
  static double deriv(double y);
};

/// Compactly supported C^inf plateau bump on [-half, half]: 1 on the inner
/// plateau, smoothstep ramps over the outer ramp_frac of the support.
struct PlateauBump {
  double half = 0.25;
  double ramp_frac = 0.5;

  double value(double z) const;
  double derivative(double z) const;
  double integral() const;  // over the real line
};

/// Zero-mean 1-periodic profile: a tall inner plateau bump minus a shallow
/// wide moat bump on the same center, coefficients balanced so the cell mean
/// vanishes. The analytic derivative feeds product-rule expansions downstream.
class ZeroMeanProfile {
 public:
  /// sup_half: support half-width in cell units (< 1/2); inner_frac: inner
  /// bump half-width as a fraction of sup_half.
  static ZeroMeanProfile make(double sup_half = 0.25, double inner_frac = 0.45,
                              double ramp_frac = 0.5);

  double value(double z) const;       // z wrapped to [-1/2, 1/2)
  double derivative(double z) const;
  double value_raw(double z) const;   // no wrapping (for scaled arguments)
  double derivative_raw(double z) const;

  double l1() const { return l1_; }
  double l2sq() const { return l2sq_; }
  double max_abs() const { return sup_; }
  double support_half() const { return outer_.half; }

 private:
  PlateauBump inner_, outer_;
  double coeff_ = 0;  // moat coefficient
  double l1_ = 0, l2sq_ = 0, sup_ = 0;
};

/// Composite Gauss-Legendre (5-point) quadrature of an analytic integrand
/// over [a,b] with n subintervals.
double quad_gl5(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace citl
