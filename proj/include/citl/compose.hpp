#pragma once

#include <optional>
#include <vector>

#include "citl/fit.hpp"
#include "citl/interp.hpp"

namespace citl {

/// A sampled torus map on one spatial slice, stored as displacement
/// Phi(x) - x per component (periodic, single-valued). Null pointers mean
/// the identity map.
struct MapSlice {
  std::array<const double*, 3> disp{nullptr, nullptr, nullptr};
  bool identity() const { return disp[0] == nullptr; }
};

/// x -> g(sigma * Phi(x)) on one coarse slice. G needs
/// `double eval(const std::array<double,3>&) const` with periodic wrapping.
template <class G>
void compose_slice(const G& g, double sigma, const Grid& coarse,
                   const MapSlice& phi, double* out) {
  const long nsp = coarse.spatial_points();
  const int d = coarse.d;
  const double h = coarse.dx();
  std::array<double, 3> y{0, 0, 0};
  if (phi.identity()) {
    for (long i = 0; i < nsp; ++i) {
      auto ix = coarse.unflat(i);
      for (int a = 0; a < d; ++a) y[a] = sigma * (ix[a] * h);
      out[i] = g.eval(y);
    }
  } else {
    for (long i = 0; i < nsp; ++i) {
      auto ix = coarse.unflat(i);
      for (int a = 0; a < d; ++a) y[a] = sigma * (ix[a] * h + phi.disp[a][i]);
      out[i] = g.eval(y);
    }
  }
}

/// Field-level composition: g is sigma^{-1}-periodic (tabulated on its fine
/// cell), phi_disp the displacement field of a time-dependent map (or empty
/// optional for the identity). effective_mu is the concentration scale of g
/// used by the Nyquist guard sigma*mu <= nx/8.
SpaceTimeField compose_with_map(const SpatialInterpolant& g, int sigma,
                                const Grid& coarse,
                                const std::optional<SpaceTimeField>& phi_disp,
                                double effective_mu);

struct RiemannLebesgueFit {
  bool below_floor = false;  // all samples under 1e-14: decay beyond floor
  double slope = 0;          // fitted d log|integral| / d log sigma
  std::vector<double> sigmas, values;
};

/// Fitted decay order of |mean of a * g(sigma Phi)| against sigma.
RiemannLebesgueFit measure_riemann_lebesgue(const Vec& a, const Grid& coarse,
                                            const SpatialInterpolant& g,
                                            const MapSlice& phi,
                                            const std::vector<int>& sigmas);

struct ImprovedHolderSample {
  double lhs = 0;         // ||a f(sigma Phi)||_r
  double term_plain = 0;  // ||a||_r ||f||_r
  double term_decay = 0;  // sigma^{-1/r} ||a||_{C^1} ||grad Phi||_{C^0}^{d-1} ||f||_r
};

ImprovedHolderSample measure_improved_holder(const Vec& a, const Grid& coarse,
                                             const SpatialInterpolant& f,
                                             double f_lr_norm, int sigma,
                                             double r, const MapSlice& phi);

}  // namespace citl
