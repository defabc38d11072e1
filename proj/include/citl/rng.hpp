#pragma once

#include <cmath>
#include <random>

#include "citl/field.hpp"

namespace citl {

/// A real trigonometric polynomial sum_m c_m trig(2 pi k_m . x + phase-free):
/// modes drawn once from a seeded generator so runs are reproducible.
struct TrigPoly {
  struct Mode {
    std::array<int, 3> k{0, 0, 0};
    double amp = 0;
    bool use_cos = false;
  };
  int d = 2;
  std::vector<Mode> modes;

  double eval(const std::array<double, 3>& x) const {
    double acc = 0;
    for (const auto& m : modes) {
      double phase = 0;
      for (int a = 0; a < d; ++a) phase += m.k[a] * x[a];
      phase *= kTwoPi;
      acc += m.amp * (m.use_cos ? std::cos(phase) : std::sin(phase));
    }
    return acc;
  }

  /// d^N along one axis, evaluated pointwise (for C^N lower bounds).
  double eval_axis_derivative(const std::array<double, 3>& x, int axis,
                              int order) const {
    double acc = 0;
    for (const auto& m : modes) {
      double phase = 0;
      for (int a = 0; a < d; ++a) phase += m.k[a] * x[a];
      phase *= kTwoPi;
      double fac = std::pow(kTwoPi * m.k[axis], order);
      // each derivative shifts the phase by pi/2
      double shifted = phase + order * kPi / 2.0;
      acc += m.amp * fac * (m.use_cos ? std::cos(shifted) : std::sin(shifted));
    }
    return acc;
  }

  static TrigPoly random(int d, int kmax, int n_modes, std::mt19937_64& rng) {
    TrigPoly p;
    p.d = d;
    std::uniform_int_distribution<int> kd(-kmax, kmax);
    std::normal_distribution<double> ad(0.0, 1.0);
    std::bernoulli_distribution bd(0.5);
    while (int(p.modes.size()) < n_modes) {
      Mode m;
      for (int a = 0; a < d; ++a) m.k[a] = kd(rng);
      bool zero = true;
      for (int a = 0; a < d; ++a)
        if (m.k[a] != 0) zero = false;
      if (zero) continue;  // keep zero mean
      m.amp = ad(rng);
      m.use_cos = bd(rng);
      p.modes.push_back(m);
    }
    return p;
  }
};

/// Fill a scalar field (time-constant) from a trig polynomial.
inline void fill_from_poly(SpaceTimeField& f, const TrigPoly& p) {
  f.fill_spatial(0, [&p](const std::array<double, 3>& x) { return p.eval(x); });
}

/// Random band-limited scalar space-time field: spatial modes |k|_inf <= kmax
/// with smooth random time envelopes (low-order trig in t).
inline SpaceTimeField random_band_limited_field(const Grid& g, int kmax,
                                                std::mt19937_64& rng,
                                                int n_modes = 8) {
  SpaceTimeField f = SpaceTimeField::scalar(g);
  TrigPoly p = TrigPoly::random(g.d, kmax, n_modes, rng);
  std::normal_distribution<double> ad(0.0, 1.0);
  std::vector<double> c0(n_modes), c1(n_modes), c2(n_modes);
  for (int m = 0; m < n_modes; ++m) {
    c0[m] = ad(rng);
    c1[m] = ad(rng);
    c2[m] = ad(rng);
  }
  const long nsp = g.spatial_points();
  for (int k = 0; k < g.nt; ++k) {
    double t = g.time(k);
    auto s = f.slice(0, k);
    for (long i = 0; i < nsp; ++i) {
      auto ix = g.unflat(i);
      std::array<double, 3> x{0, 0, 0};
      for (int a = 0; a < g.d; ++a) x[a] = double(ix[a]) / g.nx;
      double acc = 0;
      for (size_t m = 0; m < p.modes.size(); ++m) {
        const auto& md = p.modes[m];
        double phase = 0;
        for (int a = 0; a < g.d; ++a) phase += md.k[a] * x[a];
        phase *= kTwoPi;
        double env =
            c0[m] + c1[m] * std::sin(kTwoPi * t) + c2[m] * std::cos(kTwoPi * t);
        acc += md.amp * env * (md.use_cos ? std::cos(phase) : std::sin(phase));
      }
      s(i) = acc;
    }
  }
  return f;
}

}  // namespace citl
