#include "citl/fft.hpp"

namespace citl {

SliceFFT::SliceFFT(const Grid& g) : g_(g) {
  line_in_.resize(g.nx);
  line_out_.resize(g.nx);
}

void SliceFFT::transform_axis(CVec& data, int axis, bool inverse) {
  const int nx = g_.nx;
  const long nsp = g_.spatial_points();
  const long nlines = nsp / nx;
  // stride between consecutive points along `axis`, row-major x1..xd
  long stride = 1;
  for (int a = g_.d - 1; a > axis; --a) stride *= nx;

  for (long line = 0; line < nlines; ++line) {
    // base offset of this line: split flat index around the axis
    long outer = line / stride;   // indices of axes slower than `axis`
    long inner = line % stride;   // indices of axes faster than `axis`
    long base = outer * stride * nx + inner;
    for (int j = 0; j < nx; ++j) line_in_(j) = data(base + j * stride);
    if (inverse)
      fft_.inv(line_out_.data(), line_in_.data(), nx);
    else
      fft_.fwd(line_out_.data(), line_in_.data(), nx);
    for (int j = 0; j < nx; ++j) data(base + j * stride) = line_out_(j);
  }
}

void SliceFFT::forward(const double* slice, CVec& spec) {
  const long nsp = g_.spatial_points();
  spec.resize(nsp);
  for (long i = 0; i < nsp; ++i) spec(i) = slice[i];
  for (int a = 0; a < g_.d; ++a) transform_axis(spec, a, false);
}

void SliceFFT::inverse(const CVec& spec, double* out) {
  const long nsp = g_.spatial_points();
  CVec tmp = spec;
  for (int a = 0; a < g_.d; ++a) transform_axis(tmp, a, true);
  for (long i = 0; i < nsp; ++i) out[i] = tmp(i).real();
}

}  // namespace citl
