#pragma once

#include <string>
#include <vector>

#include "citl/compose.hpp"
#include "citl/profiles.hpp"

namespace citl {

/// Spatial Mikado triple (Theta, W, Omega) for direction e_j on the fine
/// cell. Theta and W depend only on the d-1 coordinates orthogonal to e_j,
/// so div(Theta W e_j) = 0 and div(W e_j) = 0 identically; Omega solves
/// div Omega = sigma Theta (fine-cell spectral gradient-form solution).
/// Cross sections for distinct j are shifted by j/(2d) along each orthogonal
/// axis so supports of different directions stay essentially disjoint.
struct MikadoTriple {
  int j = 1;      // direction index, 1-based
  int axis = 0;   // e_j axis, 0-based
  int d = 2;
  double mu = 1;
  int sigma = 1;
  double p = 2;

  int m = 1;                    // cross-section dimension d-1
  int nf = 0;                   // fine resolution per cross-section axis
  std::array<int, 2> perp{1, 2};
  double center = 0;

  Vec theta_cs, w_cs, tw_cs;    // cross-section samples (m-dim row-major)
  std::vector<Vec> omega_cs;    // m components along perp axes

  SpatialInterpolant theta_ip, w_ip, tw_ip;
  std::vector<SpatialInterpolant> omega_ip;

  // cross-section coordinates of a d-dim point
  std::array<double, 3> cs(const std::array<double, 3>& y) const {
    std::array<double, 3> z{0, 0, 0};
    for (int i = 0; i < m; ++i) z[i] = y[perp[i]] - center;
    return z;
  }
  double eval_theta(const std::array<double, 3>& y) const { return theta_ip.eval(cs(y)); }
  double eval_w(const std::array<double, 3>& y) const { return w_ip.eval(cs(y)); }
  double eval_tw(const std::array<double, 3>& y) const { return tw_ip.eval(cs(y)); }
  /// Component c of Omega (zero along the block axis).
  double eval_omega(int c, const std::array<double, 3>& y) const {
    if (c == axis) return 0.0;
    for (int i = 0; i < m; ++i)
      if (perp[i] == c) return omega_ip[i].eval(cs(y));
    return 0.0;
  }

  /// Adaptors with the eval() shape compose_slice expects.
  struct ThetaFn {
    const MikadoTriple* t;
    double eval(const std::array<double, 3>& y) const { return t->eval_theta(y); }
  };
  struct WFn {
    const MikadoTriple* t;
    double eval(const std::array<double, 3>& y) const { return t->eval_w(y); }
  };
  struct TwFn {
    const MikadoTriple* t;
    double eval(const std::array<double, 3>& y) const { return t->eval_tw(y); }
  };
  struct OmegaFn {
    const MikadoTriple* t;
    int c;
    double eval(const std::array<double, 3>& y) const { return t->eval_omega(c, y); }
  };

  // fine-grid diagnostics filled at build time
  double int_theta_w = 0;   // = 1 after normalization
  double mean_theta = 0, mean_w = 0;
  double div_omega_err = 0; // sup |div Omega_cs - theta_cs| / sup|theta_cs|
};

/// Profile family used by both spatial and temporal blocks (fixed, documented
/// construction so all constants are reproducible).
struct BlockProfileParams {
  double sup_half = 0.22;
  double inner_frac = 0.5;
  double ramp_frac = 0.6;
};

MikadoTriple build_mikado(int j, double mu, int sigma, double p, int d,
                          const Grid& coarse_guard,
                          const BlockProfileParams& prof = {});

/// Temporal triple (gbar, gtilde, h) with analytic closed-form values and
/// derivatives; h is integrated from its defining identity by composite
/// Gauss quadrature on the time grid. Profiles for different j occupy
/// disjoint slots of each lambda-period.
struct TemporalTriple {
  int j = 1;
  double kappa = 1;
  int lambda = 1;
  double s = 2;
  double center = 0;      // slot center (j-1/2)/d within the unit period
  double amp_bar = 1;     // kappa^{1/s'} * split
  double amp_tilde = 1;   // kappa^{1/s}  * split
  ZeroMeanProfile q;

  double gbar(double t) const;
  double gtilde(double t) const;
  double dgbar(double t) const;   // exact derivative
  double dgtilde(double t) const;

  Vec h;          // sampled at the nt grid times
  double h_sup = 0;
  double int_gbar_gtilde = 0;  // = 1 after normalization
};

TemporalTriple build_temporal(int j, double kappa, int lambda, double s, int nt,
                              int d, const BlockProfileParams& prof = {});

/// One row of a scaling-law report: fitted vs predicted exponent.
struct ScalingRow {
  std::string field;   // Theta | W | Omega | gbar | gtilde
  std::string sweep;   // mu | sigma | kappa | lambda
  int m = 0;
  double r = 1;
  double predicted = 0;
  double fitted = 0;
  double residual = 0;  // max log-residual of the fit
};

/// Measured Mikado norm scalings on self-scaled coarse grids.
/// mu-sweep at fixed sigma and sigma-sweep at fixed mu; >= 4 points each.
std::vector<ScalingRow> mikado_scaling_report(
    int d, double p, const std::vector<double>& mu_sweep, int sigma_fixed,
    const std::vector<int>& sigma_sweep, double mu_fixed,
    const std::vector<double>& r_list, const std::vector<int>& m_list,
    const BlockProfileParams& prof = {});

std::vector<ScalingRow> temporal_scaling_report(
    double s, const std::vector<double>& kappa_sweep, int lambda_fixed,
    const std::vector<double>& r_list, const std::vector<int>& m_list,
    const BlockProfileParams& prof = {});

/// Measured norm of grad^m F on a slice-sized coarse grid (Frobenius over the
/// derivative tensor), used by the scaling reports and tests.
double measure_block_norm(const MikadoTriple& t, const std::string& field, int m,
                          double r);

double conjugate_exponent(double x);

}  // namespace citl
