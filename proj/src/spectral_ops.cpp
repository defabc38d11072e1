#include "citl/spectral_ops.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace citl {

namespace {

using cd = std::complex<double>;

bool at_nyquist(const Grid& g, const std::array<int, 3>& kv) {
  for (int a = 0; a < g.d; ++a)
    if (kv[a] == g.nx / 2) return true;
  return false;
}

// 4th-order first-derivative stencils in time.
struct TimeStencil {
  int off0;
  double c[5];
};
TimeStencil stencil_for(int k, int nt) {
  if (k == 0) return {0, {-25, 48, -36, 16, -3}};
  if (k == 1) return {-1, {-3, -10, 18, -6, 1}};
  if (k == nt - 2) return {-3, {-1, 6, -18, 10, 3}};
  if (k == nt - 1) return {-4, {3, -16, 36, -48, 25}};
  return {-2, {1, -8, 0, 8, -1}};
}

SpaceTimeField time_derivative_once(const SpaceTimeField& f) {
  const Grid& g = f.grid();
  SpaceTimeField out(g, f.rank());
  const double inv12dt = 1.0 / (12.0 * g.dt());
  for (int c = 0; c < f.rank(); ++c)
    for (int k = 0; k < g.nt; ++k) {
      auto s = stencil_for(k, g.nt);
      auto o = out.slice(c, k);
      o.setZero();
      for (int j = 0; j < 5; ++j)
        if (s.c[j] != 0.0) o += (s.c[j] * inv12dt) * f.slice(c, k + s.off0 + j);
    }
  return out;
}

}  // namespace

Vec time_derivative_samples(const Vec& v, double dt) {
  const int nt = int(v.size());
  Vec out(nt);
  const double inv12dt = 1.0 / (12.0 * dt);
  for (int k = 0; k < nt; ++k) {
    auto s = stencil_for(k, nt);
    double acc = 0;
    for (int j = 0; j < 5; ++j) acc += s.c[j] * v(k + s.off0 + j);
    out(k) = acc * inv12dt;
  }
  return out;
}

void slice_derivative(SliceFFT& fft, const double* in, double* out, int axis,
                      int order) {
  const Grid& g = fft.grid();
  CVec spec;
  fft.forward(in, spec);
  const long nsp = g.spatial_points();
  for (long i = 0; i < nsp; ++i) {
    auto kv = fft.wavevec(i);
    if (at_nyquist(g, kv)) {
      spec(i) = 0;
      continue;
    }
    spec(i) *= std::pow(cd(0.0, kTwoPi * kv[axis]), order);
  }
  fft.inverse(spec, out);
}

void slice_gradient(SliceFFT& fft, const double* in, std::vector<double*> out) {
  const Grid& g = fft.grid();
  CVec spec;
  fft.forward(in, spec);
  const long nsp = g.spatial_points();
  CVec comp(nsp);
  for (int a = 0; a < g.d; ++a) {
    for (long i = 0; i < nsp; ++i) {
      auto kv = fft.wavevec(i);
      comp(i) = at_nyquist(g, kv) ? cd(0, 0) : spec(i) * cd(0.0, kTwoPi * kv[a]);
    }
    fft.inverse(comp, out[a]);
  }
}

void slice_anti_divergence(SliceFFT& fft, const double* in,
                           std::vector<double*> out) {
  const Grid& g = fft.grid();
  CVec spec;
  fft.forward(in, spec);
  const long nsp = g.spatial_points();
  CVec comp(nsp);
  for (int a = 0; a < g.d; ++a) {
    for (long i = 0; i < nsp; ++i) {
      auto kv = fft.wavevec(i);
      double k2 = 0;
      for (int b = 0; b < g.d; ++b) k2 += double(kv[b]) * kv[b];
      if (k2 == 0 || at_nyquist(g, kv)) {
        comp(i) = 0;
        continue;
      }
      // lap^{-1} grad: multiply by (2 pi i k_a) / (-4 pi^2 |k|^2)
      comp(i) = spec(i) * cd(0.0, kv[a]) / (-kTwoPi * k2);
    }
    fft.inverse(comp, out[a]);
  }
}

SpaceTimeField derivative(const SpaceTimeField& f, int axis, int order) {
  if (order < 0 || order > 4)
    throw std::invalid_argument("derivative: order must be in [0,4]");
  if (order == 0) return f;
  if (axis == kTimeAxis) {
    SpaceTimeField out = time_derivative_once(f);
    for (int m = 1; m < order; ++m) out = time_derivative_once(out);
    return out;
  }
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.d) throw std::invalid_argument("derivative: bad axis");
  SpaceTimeField out(g, f.rank());
  SliceFFT fft(g);
  for (int c = 0; c < f.rank(); ++c)
    for (int k = 0; k < g.nt; ++k)
      slice_derivative(fft, f.slice(c, k).data(), out.slice(c, k).data(), axis,
                       order);
  return out;
}

SpaceTimeField anti_divergence(const SpaceTimeField& f) {
  if (!f.is_scalar())
    throw std::invalid_argument("anti_divergence: scalar input required");
  const Grid& g = f.grid();
  SpaceTimeField out = SpaceTimeField::vector(g);
  SliceFFT fft(g);
  for (int k = 0; k < g.nt; ++k) {
    std::vector<double*> comps(g.d);
    for (int a = 0; a < g.d; ++a) comps[a] = out.slice(a, k).data();
    slice_anti_divergence(fft, f.slice(0, k).data(), comps);
  }
  return out;
}

SpaceTimeField divergence(const SpaceTimeField& v) {
  const Grid& g = v.grid();
  if (v.rank() != g.d) throw std::invalid_argument("divergence: vector input required");
  SpaceTimeField out = SpaceTimeField::scalar(g);
  SliceFFT fft(g);
  Vec tmp(g.spatial_points());
  for (int k = 0; k < g.nt; ++k) {
    auto o = out.slice(0, k);
    o.setZero();
    for (int a = 0; a < g.d; ++a) {
      slice_derivative(fft, v.slice(a, k).data(), tmp.data(), a, 1);
      o += tmp;
    }
  }
  return out;
}

SpaceTimeField gradient(const SpaceTimeField& f) {
  if (!f.is_scalar()) throw std::invalid_argument("gradient: scalar input required");
  const Grid& g = f.grid();
  SpaceTimeField out = SpaceTimeField::vector(g);
  SliceFFT fft(g);
  for (int k = 0; k < g.nt; ++k) {
    std::vector<double*> comps(g.d);
    for (int a = 0; a < g.d; ++a) comps[a] = out.slice(a, k).data();
    slice_gradient(fft, f.slice(0, k).data(), comps);
  }
  return out;
}

Vec spatial_means(const SpaceTimeField& f) {
  const Grid& g = f.grid();
  Vec m(g.nt);
  for (int k = 0; k < g.nt; ++k) m(k) = f.slice(0, k).mean();
  return m;
}

ConstCoeffOperator ConstCoeffOperator::minus_laplacian(int d) {
  ConstCoeffOperator op;
  op.order = 2;
  for (int a = 0; a < d; ++a) {
    Term t;
    t.alpha[a] = 2;
    t.coeff = -1.0;
    op.terms.push_back(t);
  }
  return op;
}

SpaceTimeField apply_operator(const SpaceTimeField& f,
                              const ConstCoeffOperator& op) {
  for (const auto& t : op.terms) {
    int tot = t.alpha[0] + t.alpha[1] + t.alpha[2];
    if (tot < 1)
      throw std::invalid_argument("apply_operator: zeroth-order term not allowed");
  }
  const Grid& g = f.grid();
  SpaceTimeField out(g, f.rank());
  SliceFFT fft(g);
  CVec spec;
  const long nsp = g.spatial_points();
  CVec sym(nsp);
  for (long i = 0; i < nsp; ++i) {
    auto kv = fft.wavevec(i);
    if (at_nyquist(g, kv)) {
      sym(i) = 0;
      continue;
    }
    cd v(0, 0);
    for (const auto& t : op.terms) {
      cd term(t.coeff, 0);
      for (int a = 0; a < g.d; ++a)
        if (t.alpha[a] > 0) term *= std::pow(cd(0.0, kTwoPi * kv[a]), t.alpha[a]);
      v += term;
    }
    sym(i) = v;
  }
  for (int c = 0; c < f.rank(); ++c)
    for (int k = 0; k < g.nt; ++k) {
      fft.forward(f.slice(c, k).data(), spec);
      spec *= sym;
      fft.inverse(spec, out.slice(c, k).data());
    }
  return out;
}

}  // namespace citl
