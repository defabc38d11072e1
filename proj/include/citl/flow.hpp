#pragma once

#include <optional>

#include "citl/compose.hpp"
#include "citl/profiles.hpp"
#include "citl/spectral_ops.hpp"

namespace citl {

/// Smooth time partition of unity subordinate to the intervals
/// I_i = [i nu, (i+1) nu]: ramps of half-width lambda^{-1/2} nu / 2 at the
/// interior boundaries, so meas supp(zeta_i zeta_{i+1}) = lambda^{-1/2} nu
/// and |dzeta| <~ lambda^{1/2} / nu.
struct ZetaPartition {
  double nu = 1;
  int D = 1;
  int lambda = 1;
  double w = 0;  // ramp half-width

  ZetaPartition() = default;
  ZetaPartition(double nu_, int D_, int lambda_);

  double zeta(int i, double t) const;
  double dzeta(int i, double t) const;
  double support_lo(int i) const { return i == 0 ? 0.0 : i * nu - w; }
  double support_hi(int i) const { return i == D - 1 ? 1.0 : (i + 1) * nu + w; }
};

/// One Lagrangian chart: inverse flow map Phi_i anchored at t_i, stored as a
/// displacement field Phi - x on the grid slices covering supp zeta_i (with a
/// small margin for time-difference stencils). The map is computed by
/// classical RK4 characteristic tracing with quintic space-time interpolation
/// of u; (grad Phi)^{-1} is recomputed from the displacement on demand.
struct FlowChart {
  int i = 0;
  double t0 = 0, t1 = 1, ti = 0.5;
  int k_lo = 0, k_hi = 0;  // inclusive grid-slice range stored
  bool identity = true;    // frozen or u == 0: Phi = x exactly
  std::vector<Vec> disp;   // d comps, each (k_hi-k_lo+1)*nsp; empty if identity

  bool covers(int k) const { return k >= k_lo && k <= k_hi; }
  MapSlice map_slice(const Grid& g, int k) const {
    MapSlice m;
    if (identity || !covers(k)) return m;
    const long nsp = g.spatial_points();
    for (size_t a = 0; a < disp.size(); ++a)
      m.disp[a] = disp[a].data() + long(k - k_lo) * nsp;
    return m;
  }

  // quality diagnostics over the stored range
  double max_det_err = 0;       // max |det grad Phi - 1|
  double max_invgrad_dev = 0;   // max |(grad Phi)^{-1} - Id|_F
  double max_cond = 1;          // max |grad|_F |grad^{-1}|_F / d
};

struct ChartAtlas {
  Grid grid;
  double nu = 1;
  int D = 1;
  int lambda = 1;
  bool frozen = false;
  ZetaPartition zeta;
  std::vector<FlowChart> charts;

  double max_det_err() const {
    double m = 0;
    for (const auto& c : charts) m = std::max(m, c.max_det_err);
    return m;
  }
  double max_invgrad_dev() const {
    double m = 0;
    for (const auto& c : charts) m = std::max(m, c.max_invgrad_dev);
    return m;
  }
};

struct FlowOptions {
  bool frozen = false;     // identity charts (no tracing)
  double cond_limit = 1e6; // chart failure threshold
  int stencil_margin = 2;  // extra slices stored beyond supp zeta
};

/// Charts for the velocity field u. Preconditions: D = 1/nu integer,
/// div u = 0 to 1e-6 (relative to the gradient scale). Throws chart failure
/// if grad Phi becomes numerically singular.
ChartAtlas build_atlas(const SpaceTimeField& u, double nu, int lambda,
                       const FlowOptions& opts = {});

/// (grad Phi)^{-1} on slice k of one chart: d*d arrays (row-major entries),
/// plus det and deviation stats. Identity charts yield Id without storage.
struct InvGradSlice {
  bool identity = true;
  std::vector<Vec> entries;  // d*d arrays if !identity
  double max_det_err = 0, max_dev = 0, max_cond = 1;

  const double* entry(int r, int c, int d) const {
    return identity ? nullptr : entries[size_t(r) * d + c].data();
  }
};
InvGradSlice invgrad_slice(const FlowChart& chart, const Grid& g, SliceFFT& fft,
                           int k);

/// Integral over time of the sup-norm of grad u; exp of this bounds the
/// chart deformation, used to decide traced vs frozen atlases.
double flow_stiffness(const SpaceTimeField& u);

/// || div[(grad Phi)^{-1} G(Phi)] - (div G)(Phi) ||_inf over the chart range
/// (G a static smooth vector field sampled on the grid).
double inverse_map_divergence_check(const FlowChart& chart, const Grid& g,
                                    const SpaceTimeField& G);

/// v with div v = f g(sigma Phi) - mean(...) on one slice (standard spectral
/// anti-divergence of the composed product).
void improved_anti_div_slice(SliceFFT& fft, const Vec& f_slice,
                             const SpatialInterpolant& g, int sigma,
                             const MapSlice& phi, std::vector<double*> out);

/// RK4 trace of one point from t_from to t_to (h capped by h_max).
std::array<double, 3> trace_point(const SpaceTimeInterpolant& u, double t_from,
                                  double t_to, std::array<double, 3> x,
                                  double h_max);

}  // namespace citl
