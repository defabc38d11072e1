#include "citl/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "citl/spectral_ops.hpp"

namespace citl {

void MixedNormSpec::validate() const {
  if (!(s >= 1.0) || !(p >= 1.0))
    throw std::invalid_argument("MixedNormSpec: exponents must be >= 1");
  if (derivative_order < 0 || derivative_order > 4)
    throw std::invalid_argument("MixedNormSpec: derivative_order must be <= 4");
}

namespace {

// L^p of a sampled nonnegative magnitude array with uniform weight 1/n.
double lp_of_magnitude(const Vec& mag, double p) {
  if (p == kInf) return mag.maxCoeff();
  double m = mag.maxCoeff();
  if (m == 0) return 0;
  return m * std::pow(((mag / m).pow(p)).mean(), 1.0 / p);
}

// multinomial m! / prod(alpha_a!)
double multinomial(int m, const std::array<int, 3>& alpha) {
  auto fact = [](int n) {
    double r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
  };
  return fact(m) / (fact(alpha[0]) * fact(alpha[1]) * fact(alpha[2]));
}

void for_each_multiindex(int d, int total, const std::function<void(const std::array<int, 3>&)>& fn) {
  if (d == 2) {
    for (int a = 0; a <= total; ++a) fn({a, total - a, 0});
  } else {
    for (int a = 0; a <= total; ++a)
      for (int b = 0; b <= total - a; ++b) fn({a, b, total - a - b});
  }
}

}  // namespace

double lp_norm_slice(const Vec& magnitude, double p) {
  return lp_of_magnitude(magnitude, p);
}

Vec spatial_norm_profile(const SpaceTimeField& f, const MixedNormSpec& spec) {
  spec.validate();
  const Grid& g = f.grid();
  const long nsp = g.spatial_points();
  Vec profile = Vec::Zero(g.nt);
  SliceFFT fft(g);
  Vec mag2(nsp), der(nsp);

  for (int k = 0; k < g.nt; ++k) {
    double inner = 0;
    // order-0 term: Euclidean magnitude across components
    mag2.setZero();
    for (int c = 0; c < f.rank(); ++c) mag2 += f.slice(c, k).square();
    inner = lp_of_magnitude(mag2.sqrt(), spec.p);
    // derivative terms
    for (int m = 1; m <= spec.derivative_order; ++m) {
      mag2.setZero();
      for_each_multiindex(g.d, m, [&](const std::array<int, 3>& alpha) {
        double w = multinomial(m, alpha);
        for (int c = 0; c < f.rank(); ++c) {
          // d^alpha of component c on this slice
          Vec tmp = f.slice(c, k);
          for (int a = 0; a < g.d; ++a)
            if (alpha[a] > 0) {
              slice_derivative(fft, tmp.data(), der.data(), a, alpha[a]);
              tmp = der;
            }
          mag2 += w * tmp.square();
        }
      });
      if (spec.derivative_norm == MixedNormSpec::DerivNorm::Sup)
        inner = std::max(inner, mag2.sqrt().maxCoeff());
      else
        inner += lp_of_magnitude(mag2.sqrt(), spec.p);
    }
    profile(k) = inner;
  }
  return profile;
}

double temporal_norm(const Vec& profile, double s, double dt) {
  if (s == kInf) return profile.maxCoeff();
  const int nt = int(profile.size());
  double m = profile.maxCoeff();
  if (m == 0) return 0;
  double acc = 0;
  for (int k = 0; k < nt; ++k) {
    double w = (k == 0 || k == nt - 1) ? 0.5 * dt : dt;
    acc += w * std::pow(profile(k) / m, s);
  }
  return m * std::pow(acc, 1.0 / s);
}

double mixed_norm(const SpaceTimeField& f, const MixedNormSpec& spec) {
  Vec profile = spatial_norm_profile(f, spec);
  return temporal_norm(profile, spec.s, f.grid().dt());
}

double lpq_norm(const SpaceTimeField& f, double s, double p) {
  MixedNormSpec spec;
  spec.s = s;
  spec.p = p;
  return mixed_norm(f, spec);
}

double l1_norm(const SpaceTimeField& f) { return lpq_norm(f, 1, 1); }
double sup_norm(const SpaceTimeField& f) { return lpq_norm(f, kInf, kInf); }

double w1p_mixed_norm(const SpaceTimeField& f, double s, double p) {
  MixedNormSpec spec;
  spec.s = s;
  spec.p = p;
  spec.derivative_order = 1;
  spec.derivative_norm = MixedNormSpec::DerivNorm::Lebesgue;
  return mixed_norm(f, spec);
}

double ck_norm_spatial(const SpaceTimeField& f, int k) {
  MixedNormSpec spec;
  spec.s = kInf;
  spec.p = kInf;
  spec.derivative_order = k;
  spec.derivative_norm = MixedNormSpec::DerivNorm::Sup;
  return mixed_norm(f, spec);
}

double ck_norm_spacetime(const SpaceTimeField& f, int k) {
  if (k < 0 || k > 4) throw std::invalid_argument("ck_norm_spacetime: k <= 4");
  double best = 0;
  SpaceTimeField cur = f;
  for (int mt = 0; mt <= k; ++mt) {
    best = std::max(best, ck_norm_spatial(cur, k - mt));
    if (mt < k) cur = derivative(cur, kTimeAxis, 1);
  }
  return best;
}

}  // namespace citl
