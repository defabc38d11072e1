#include "citl/cutoffs.hpp"

#include <cmath>

#include "citl/blocks.hpp"
#include "citl/norms.hpp"
#include "citl/profiles.hpp"
#include "citl/spectral_ops.hpp"

namespace citl {

double choose_margin(const SpaceTimeField& R, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("choose_margin: delta > 0");
  if (!R.all_finite()) throw std::invalid_argument("choose_margin: R not finite");
  double rsup = R.max_abs();
  if (rsup == 0) return 0.125;
  return std::min(0.125, delta / (32.0 * R.grid().d * rsup));
}

namespace {

// spatial 2/3-rule low-pass per slice: identity on resolved content, kills
// the sub-grid tail the transition bands cannot represent
SpaceTimeField spatial_lowpass(const SpaceTimeField& f) {
  const Grid& g = f.grid();
  SpaceTimeField out = f;
  SliceFFT fft(g);
  CVec spec;
  const long nsp = g.spatial_points();
  const int kcut = g.nx / 3;
  for (int k = 0; k < g.nt; ++k) {
    fft.forward(f.slice(0, k).data(), spec);
    for (long i = 0; i < nsp; ++i) {
      auto kv = fft.wavevec(i);
      for (int a = 0; a < g.d; ++a)
        if (std::abs(kv[a]) > kcut) spec(i) = 0;
    }
    fft.inverse(spec, out.slice(0, k).data());
  }
  return out;
}

double time_ramp(double t, double r) {
  double left = Smoothstep::value((t - r / 2) / (r / 2));
  double right = 1.0 - Smoothstep::value((t - (1.0 - r)) / (r / 2));
  return left * right;
}

}  // namespace

CutoffSet build_cutoffs(const SpaceTimeField& R, double delta, double r) {
  const Grid& g = R.grid();
  const int d = g.d;
  if (R.rank() != d) throw std::invalid_argument("build_cutoffs: R must be a vector field");
  CutoffSet cs;
  cs.delta = delta;
  cs.r = r;
  cs.v0 = delta / (16.0 * d);
  cs.v1 = delta / (8.0 * d);
  const double band = cs.v1 - cs.v0;
  const long nsp = g.spatial_points();
  SliceFFT fft(g);
  Vec der(nsp);

  for (int j = 0; j < d; ++j) {
    SpaceTimeField Rj = SpaceTimeField::scalar(g);
    Rj.comp(0) = R.comp(j);
    bool active = Rj.max_abs() > 1e-14 * std::max(1.0, R.max_abs());
    cs.active.push_back(active);
    if (!active) {
      cs.chi.push_back(SpaceTimeField::scalar(g));
      cs.smooth_err.push_back(0);
      cs.band_cells.push_back(kInf);
      continue;
    }
    SpaceTimeField Rs = spatial_lowpass(Rj);
    double e = 0;
    for (int c = 0; c < 1; ++c) e = std::max(e, (Rs.comp(0) - Rj.comp(0)).abs().maxCoeff());
    cs.smooth_err.push_back(e);
    if (e >= 0.375 * band)
      throw std::runtime_error(
          "build_cutoffs: value band unresolvable on the grid (sub-grid "
          "oscillation exceeds the transition band)");
    const double lo = cs.v0 + e + band / 8.0;
    const double hi = cs.v1 - e - band / 8.0;

    // spatial thickness of the realized ramp, in cells
    double grad_sup = 0;
    for (int k = 0; k < g.nt; ++k) {
      Vec fro = Vec::Zero(nsp);
      Vec sv = Rs.slice(0, k);
      for (int a = 0; a < d; ++a) {
        slice_derivative(fft, sv.data(), der.data(), a, 1);
        fro += der.square();
      }
      grad_sup = std::max(grad_sup, std::sqrt(fro.maxCoeff()));
    }
    double cells = (grad_sup > 0) ? (hi - lo) / grad_sup * g.nx : kInf;
    cs.band_cells.push_back(cells);
    if (cells < 2.0)
      throw std::runtime_error(
          "build_cutoffs: cutoff transition thinner than 2 cells");

    // temporal ramp resolution matters only where R actually reaches it
    double dt = g.dt();
    if (r / 2 < 6 * dt) {
      double reach = 0;
      for (int k = 0; k < g.nt; ++k) {
        double t = g.time(k);
        if (t < 1.25 * r || t > 1.0 - 1.25 * r)
          reach = std::max(reach, Rs.slice(0, k).abs().maxCoeff());
      }
      if (reach > cs.v0)
        throw std::runtime_error(
            "build_cutoffs: temporal ramp band unresolvable on the grid");
    }

    SpaceTimeField chi = SpaceTimeField::scalar(g);
    for (int k = 0; k < g.nt; ++k) {
      double T = time_ramp(g.time(k), r);
      auto rs = Rs.slice(0, k);
      auto out = chi.slice(0, k);
      if (T == 0.0) {
        out.setZero();
        continue;
      }
      for (long i = 0; i < nsp; ++i)
        out(i) = T * Smoothstep::value((std::abs(rs(i)) - lo) / (hi - lo));
    }
    cs.chi.push_back(std::move(chi));
  }
  return cs;
}

CoefficientFields build_coefficients(const CutoffSet& cut,
                                     const SpaceTimeField& R, double s,
                                     double p) {
  const Grid& g = R.grid();
  const int d = g.d;
  CoefficientFields cf;
  cf.s = s;
  cf.p = p;
  const double pp = conjugate_exponent(p);
  const double expo = 1.0 / s - 1.0 / p;
  const long nsp = g.spatial_points();
  const double dt = g.dt();

  for (int j = 0; j < d; ++j) {
    SpaceTimeField a = SpaceTimeField::scalar(g);
    SpaceTimeField b = SpaceTimeField::scalar(g);
    Vec w = Vec::Zero(g.nt);
    bool active = cut.active[j];
    double W = 0;
    if (active) {
      for (int k = 0; k < g.nt; ++k)
        w(k) = (cut.chi[j].slice(0, k) * R.slice(j, k)).abs().mean();
      W = temporal_norm(w, 1.0, dt);
      if (W <= 0) active = false;
    }
    cf.active.push_back(active);
    cf.time_weight.push_back(w);
    cf.total_weight.push_back(W);
    if (!active) {
      cf.a.push_back(std::move(a));
      cf.b.push_back(std::move(b));
      continue;
    }
    for (int k = 0; k < g.nt; ++k) {
      double ratio = std::max(w(k) / W, 1e-12);
      double ra = std::pow(ratio, expo);
      double rb = std::pow(ratio, -expo);
      auto chi = cut.chi[j].slice(0, k);
      auto rj = R.slice(j, k);
      auto as = a.slice(0, k);
      auto bs = b.slice(0, k);
      for (long i = 0; i < nsp; ++i) {
        double av = std::abs(rj(i));
        double sgn = (rj(i) > 0) ? -1.0 : (rj(i) < 0 ? 1.0 : 0.0);
        as(i) = ra * sgn * chi(i) * std::pow(av, 1.0 / p);
        bs(i) = rb * chi(i) * ((pp == kInf) ? 1.0 : std::pow(av, 1.0 / pp));
      }
    }
    cf.a.push_back(std::move(a));
    cf.b.push_back(std::move(b));
  }
  return cf;
}

double coefficient_bound_violation(const CoefficientFields& cf,
                                   const CutoffSet& cut) {
  double worst = -kInf;
  const double s = cf.s, p = cf.p;
  const double pp = conjugate_exponent(p);
  const double sp = conjugate_exponent(s);
  for (size_t j = 0; j < cf.a.size(); ++j) {
    if (!cf.active[j]) continue;
    const Grid& g = cf.a[j].grid();
    double W = cf.total_weight[j];
    for (int k = 0; k < g.nt; ++k) {
      double wk = cf.time_weight[j](k);
      if (wk <= 1e-10 * W) continue;  // ratio floor region: product vanishes
      double lhs_a = lp_norm_slice(cf.a[j].slice(0, k).abs(), p);
      double rhs_a = std::pow(W, 1.0 / p - 1.0 / s) * std::pow(wk, 1.0 / s);
      double lhs_b = lp_norm_slice(cf.b[j].slice(0, k).abs(), pp);
      double rhs_b = std::pow(W, 1.0 / s - 1.0 / p) *
                     ((sp == kInf) ? 1.0 : std::pow(wk, 1.0 / sp));
      double scale_a = std::max(rhs_a, 1e-30);
      double scale_b = std::max(rhs_b, 1e-30);
      worst = std::max(worst, (lhs_a - rhs_a) / scale_a);
      worst = std::max(worst, (lhs_b - rhs_b) / scale_b);
    }
  }
  return worst;
}

}  // namespace citl
