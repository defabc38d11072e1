#pragma once

#include <unsupported/Eigen/FFT>

#include "citl/field.hpp"
#include "citl/grid.hpp"

namespace citl {

/// d-dimensional FFT of one spatial slice (row-major, x1 slowest). Forward is
/// unnormalized, inverse carries the 1/n per axis, so forward+inverse is the
/// identity. One instance owns its plans and scratch; re-use it across slices.
class SliceFFT {
 public:
  explicit SliceFFT(const Grid& g);

  void forward(const double* slice, CVec& spec);
  void inverse(const CVec& spec, double* out);

  /// Wavenumber tuple of a flat spectral index.
  std::array<int, 3> wavevec(long idx) const {
    auto ix = g_.unflat(idx);
    for (int a = 0; a < g_.d; ++a) ix[a] = g_.wavenumber(ix[a]);
    return ix;
  }

  const Grid& grid() const { return g_; }

 private:
  void transform_axis(CVec& data, int axis, bool inverse);

  Grid g_;
  Eigen::FFT<double> fft_;
  CVec line_in_, line_out_;
};

}  // namespace citl
