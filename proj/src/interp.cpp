#include "citl/interp.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>

namespace citl {

namespace {

// Centered quintic cardinal B-spline.
inline double bspline5(double x) {
  double t = std::abs(x);
  if (t >= 3.0) return 0.0;
  double a = 3.0 - t;
  double r = a * a * a * a * a;
  if (t < 2.0) {
    double b = 2.0 - t;
    r -= 6.0 * b * b * b * b * b;
  }
  if (t < 1.0) {
    double c = 1.0 - t;
    r += 15.0 * c * c * c * c * c;
  }
  return r / 120.0;
}

// weights for the 6 taps at offsets floor(u)+m, m=-2..3
inline void bspline5_weights(double frac, double* w) {
  for (int m = -2; m <= 3; ++m) w[m + 2] = bspline5(frac - m);
}

// In-place complex FFT along one axis of a d-dim row-major n^d array.
void axis_fft(Eigen::FFT<double>& fft, CVec& data, int d, int n, int axis,
              bool inverse) {
  long nsp = 1;
  for (int a = 0; a < d; ++a) nsp *= n;
  long stride = 1;
  for (int a = d - 1; a > axis; --a) stride *= n;
  const long nlines = nsp / n;
  CVec in(n), out(n);
  for (long line = 0; line < nlines; ++line) {
    long outer = line / stride, inner = line % stride;
    long base = outer * stride * n + inner;
    for (int j = 0; j < n; ++j) in(j) = data(base + j * stride);
    if (inverse)
      fft.inv(out.data(), in.data(), n);
    else
      fft.fwd(out.data(), in.data(), n);
    for (int j = 0; j < n; ++j) data(base + j * stride) = out(j);
  }
}

}  // namespace

SpatialInterpolant::SpatialInterpolant(int d, int n, const Vec& samples)
    : d_(d), n_(n) {
  long nsp = 1;
  for (int a = 0; a < d; ++a) nsp *= n;
  if (samples.size() != nsp)
    throw std::invalid_argument("SpatialInterpolant: sample count mismatch");
  // FFT prefilter: the periodic B-spline collocation matrix is a convolution,
  // diagonal in Fourier with symbol (66 + 52 cos + 2 cos2)/120 > 0.
  Eigen::FFT<double> fft;
  CVec spec(nsp);
  for (long i = 0; i < nsp; ++i) spec(i) = samples(i);
  for (int a = 0; a < d; ++a) axis_fft(fft, spec, d, n, a, false);
  Vec symbol(n);
  for (int k = 0; k < n; ++k)
    symbol(k) =
        (66.0 + 52.0 * std::cos(kTwoPi * k / n) + 2.0 * std::cos(2 * kTwoPi * k / n)) /
        120.0;
  for (long i = 0; i < nsp; ++i) {
    long idx = i;
    double s = 1.0;
    for (int a = d - 1; a >= 0; --a) {
      s *= symbol(int(idx % n));
      idx /= n;
    }
    spec(i) /= s;
  }
  for (int a = 0; a < d; ++a) axis_fft(fft, spec, d, n, a, true);
  coef_.resize(nsp);
  for (long i = 0; i < nsp; ++i) coef_(i) = spec(i).real();
}

double SpatialInterpolant::eval(const std::array<double, 3>& y) const {
  int base[3];
  double w[3][6];
  for (int a = 0; a < d_; ++a) {
    double u = y[a] * n_;
    double fl = std::floor(u);
    bspline5_weights(u - fl, w[a]);
    int b = int(fl) % n_;
    if (b < 0) b += n_;
    base[a] = b;
  }
  // tensor-product gather with periodic wrap
  const double* c = coef_.data();
  double acc = 0;
  if (d_ == 1) {
    for (int m = 0; m < 6; ++m) {
      int j = base[0] + m - 2;
      if (j < 0) j += n_;
      else if (j >= n_) j -= n_;
      acc += w[0][m] * c[j];
    }
  } else if (d_ == 2) {
    int i0[6], i1[6];
    for (int m = 0; m < 6; ++m) {
      i0[m] = base[0] + m - 2;
      if (i0[m] < 0) i0[m] += n_;
      else if (i0[m] >= n_) i0[m] -= n_;
      i1[m] = base[1] + m - 2;
      if (i1[m] < 0) i1[m] += n_;
      else if (i1[m] >= n_) i1[m] -= n_;
    }
    for (int m0 = 0; m0 < 6; ++m0) {
      const double* row = c + long(i0[m0]) * n_;
      double racc = 0;
      for (int m1 = 0; m1 < 6; ++m1) racc += w[1][m1] * row[i1[m1]];
      acc += w[0][m0] * racc;
    }
  } else {
    int idx[3][6];
    for (int a = 0; a < 3; ++a)
      for (int m = 0; m < 6; ++m) {
        int j = base[a] + m - 2;
        j %= n_;
        if (j < 0) j += n_;
        idx[a][m] = j;
      }
    for (int m0 = 0; m0 < 6; ++m0)
      for (int m1 = 0; m1 < 6; ++m1) {
        const double* row = c + (long(idx[0][m0]) * n_ + idx[1][m1]) * n_;
        double racc = 0;
        for (int m2 = 0; m2 < 6; ++m2) racc += w[2][m2] * row[idx[2][m2]];
        acc += w[0][m0] * w[1][m1] * racc;
      }
  }
  return acc;
}

SpaceTimeInterpolant::SpaceTimeInterpolant(const SpaceTimeField& f)
    : grid_(f.grid()), rank_(f.rank()) {
  // steady if every slice matches the first
  steady_ = true;
  const double scale = std::max(1.0, f.max_abs());
  for (int c = 0; c < rank_ && steady_; ++c) {
    auto s0 = f.slice(c, 0);
    for (int k = 1; k < grid_.nt && steady_; ++k)
      if ((f.slice(c, k) - s0).abs().maxCoeff() > 1e-14 * scale) steady_ = false;
  }
  if (steady_) {
    for (int c = 0; c < rank_; ++c)
      slices_.emplace_back(grid_.d, grid_.nx, Vec(f.slice(c, 0)));
  } else {
    slices_.reserve(size_t(grid_.nt) * rank_);
    for (int k = 0; k < grid_.nt; ++k)
      for (int c = 0; c < rank_; ++c)
        slices_.emplace_back(grid_.d, grid_.nx, Vec(f.slice(c, k)));
  }
}

void SpaceTimeInterpolant::eval(double t, const std::array<double, 3>& y,
                                double* out) const {
  if (steady_) {
    for (int c = 0; c < rank_; ++c) out[c] = slices_[c].eval(y);
    return;
  }
  const int nt = grid_.nt;
  double tau = std::min(1.0, std::max(0.0, t)) / grid_.dt();
  int k0 = int(std::floor(tau)) - 2;
  if (k0 < 0) k0 = 0;
  if (k0 > nt - 6) k0 = nt - 6;
  double w[6];
  for (int j = 0; j < 6; ++j) {
    double wj = 1.0;
    for (int m = 0; m < 6; ++m)
      if (m != j) wj *= (tau - (k0 + m)) / double(j - m);
    w[j] = wj;
  }
  for (int c = 0; c < rank_; ++c) out[c] = 0;
  for (int j = 0; j < 6; ++j) {
    if (w[j] == 0.0) continue;
    for (int c = 0; c < rank_; ++c)
      out[c] += w[j] * slices_[size_t(k0 + j) * rank_ + c].eval(y);
  }
}

}  // namespace citl
