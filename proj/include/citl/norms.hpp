#pragma once

#include <limits>

#include "citl/field.hpp"

namespace citl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Mixed space-time norm L^s_t L^p_x with optional derivative terms:
/// derivative_norm Lebesgue gives W^{m,p} inner norms, Sup gives C^m.
struct MixedNormSpec {
  double s = 1;                  // temporal exponent in [1,inf]
  double p = 1;                  // spatial exponent in [1,inf]
  int derivative_order = 0;      // <= 4
  enum class DerivNorm { Lebesgue, Sup } derivative_norm = DerivNorm::Lebesgue;

  void validate() const;
};

/// L^p of one sampled magnitude array over its unit cell (uniform weights).
double lp_norm_slice(const Vec& magnitude, double p);

/// Inner spatial norms per time sample (trapezoidal quadrature on the
/// periodic grid; exact for band-limited integrands up to aliasing).
/// Vector fields use the pointwise Euclidean magnitude; derivative terms use
/// the Frobenius norm of the derivative tensor.
Vec spatial_norm_profile(const SpaceTimeField& f, const MixedNormSpec& spec);

/// Outer temporal norm of a sampled profile (trapezoid; s = inf is the max).
double temporal_norm(const Vec& profile, double s, double dt);

double mixed_norm(const SpaceTimeField& f, const MixedNormSpec& spec);

/// Shorthands.
double lpq_norm(const SpaceTimeField& f, double s, double p);
double l1_norm(const SpaceTimeField& f);                  // L^1_{t,x}
double sup_norm(const SpaceTimeField& f);                 // L^inf_{t,x}
double w1p_mixed_norm(const SpaceTimeField& f, double s, double p);

/// ||f||_{C^k_{t,x}}: grid max over all space-time derivatives of total order
/// <= k (spectral in space, 4th-order differences in time), k <= 4.
double ck_norm_spacetime(const SpaceTimeField& f, int k);

/// Spatial-only C^k profile max_t version.
double ck_norm_spatial(const SpaceTimeField& f, int k);

}  // namespace citl
