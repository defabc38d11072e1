#pragma once

#include <vector>

#include "citl/fft.hpp"

namespace citl {

/// Axis selector for derivative(): 0..d-1 spatial, kTimeAxis the time axis.
inline constexpr int kTimeAxis = -1;

/// Spectral derivative for spatial axes (exact for band-limited data);
/// 4th-order central differences in time with one-sided closure at t in {0,1}.
/// order > 4 is rejected.
SpaceTimeField derivative(const SpaceTimeField& f, int axis, int order = 1);

/// Standard anti-divergence R f = lap^{-1} grad f. The result g satisfies
/// div g = f - spatial_mean(f) at every time sample and has zero spatial mean
/// per component.
SpaceTimeField anti_divergence(const SpaceTimeField& f);

SpaceTimeField divergence(const SpaceTimeField& v);
SpaceTimeField gradient(const SpaceTimeField& f);

/// Per-time-sample spatial means of a scalar field.
Vec spatial_means(const SpaceTimeField& f);

/// Slice-level kernels used by the field-level wrappers and by callers that
/// stream their own slices (one SliceFFT reused across calls).
void slice_derivative(SliceFFT& fft, const double* in, double* out, int axis,
                      int order);
void slice_anti_divergence(SliceFFT& fft, const double* in,
                           std::vector<double*> out);
void slice_gradient(SliceFFT& fft, const double* in, std::vector<double*> out);

/// Constant-coefficient differential operator sum_alpha c_alpha d^alpha,
/// applied spectrally. Every term must have |alpha| >= 1 (no zeroth-order
/// part, so spatial constants map to zero).
struct ConstCoeffOperator {
  struct Term {
    std::array<int, 3> alpha{0, 0, 0};
    double coeff = 0;
  };
  std::vector<Term> terms;
  int order = 0;

  static ConstCoeffOperator minus_laplacian(int d);
};

SpaceTimeField apply_operator(const SpaceTimeField& f,
                              const ConstCoeffOperator& op);

/// Time derivative of a 1-D sampled function on the uniform grid (same
/// 4th-order stencils as the field version).
Vec time_derivative_samples(const Vec& v, double dt);

}  // namespace citl
