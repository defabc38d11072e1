#include "citl/flow.hpp"

#include <cmath>

#include "citl/norms.hpp"

namespace citl {

ZetaPartition::ZetaPartition(double nu_, int D_, int lambda_)
    : nu(nu_), D(D_), lambda(lambda_) {
  w = 0.5 * nu / std::sqrt(double(lambda));
}

double ZetaPartition::zeta(int i, double t) const {
  double up = (i == 0) ? 1.0 : Smoothstep::value((t - (i * nu - w)) / (2 * w));
  double down = (i == D - 1)
                    ? 1.0
                    : 1.0 - Smoothstep::value((t - ((i + 1) * nu - w)) / (2 * w));
  return up * down;
}

double ZetaPartition::dzeta(int i, double t) const {
  double up = (i == 0) ? 1.0 : Smoothstep::value((t - (i * nu - w)) / (2 * w));
  double dup =
      (i == 0) ? 0.0 : Smoothstep::deriv((t - (i * nu - w)) / (2 * w)) / (2 * w);
  double down = (i == D - 1)
                    ? 1.0
                    : 1.0 - Smoothstep::value((t - ((i + 1) * nu - w)) / (2 * w));
  double ddown = (i == D - 1) ? 0.0
                              : -Smoothstep::deriv((t - ((i + 1) * nu - w)) /
                                                   (2 * w)) /
                                    (2 * w);
  return dup * down + up * ddown;
}

std::array<double, 3> trace_point(const SpaceTimeInterpolant& u, double t_from,
                                  double t_to, std::array<double, 3> x,
                                  double h_max) {
  double span = t_to - t_from;
  if (span == 0.0) return x;
  int n = std::max(1, int(std::ceil(std::abs(span) / h_max)));
  double h = span / n;
  double uv[3] = {0, 0, 0};
  std::array<double, 3> k1{}, k2{}, k3{}, k4{}, y{};
  for (int stp = 0; stp < n; ++stp) {
    double t = t_from + stp * h;
    u.eval(t, x, uv);
    for (int a = 0; a < 3; ++a) k1[a] = uv[a];
    for (int a = 0; a < 3; ++a) y[a] = x[a] + 0.5 * h * k1[a];
    u.eval(t + 0.5 * h, y, uv);
    for (int a = 0; a < 3; ++a) k2[a] = uv[a];
    for (int a = 0; a < 3; ++a) y[a] = x[a] + 0.5 * h * k2[a];
    u.eval(t + 0.5 * h, y, uv);
    for (int a = 0; a < 3; ++a) k3[a] = uv[a];
    for (int a = 0; a < 3; ++a) y[a] = x[a] + h * k3[a];
    u.eval(t + h, y, uv);
    for (int a = 0; a < 3; ++a) k4[a] = uv[a];
    for (int a = 0; a < 3; ++a)
      x[a] += h / 6.0 * (k1[a] + 2 * k2[a] + 2 * k3[a] + k4[a]);
  }
  return x;
}

namespace {

// One chart's displacement slices by incremental tracing: the slice at the
// anchor is traced directly, each further slice does one short trace to its
// neighbor and composes with the neighbor's displacement.
void trace_chart(FlowChart& chart, const Grid& g, const SpaceTimeInterpolant& u,
                 double h_max) {
  const long nsp = g.spatial_points();
  const int nk = chart.k_hi - chart.k_lo + 1;
  chart.disp.assign(g.d, Vec::Zero(long(nk) * nsp));
  const double dxh = g.dx();

  int ka = int(std::lround(chart.ti / g.dt()));
  ka = std::min(std::max(ka, chart.k_lo), chart.k_hi);

  auto slice_ptr = [&](int a, int k) {
    return chart.disp[a].data() + long(k - chart.k_lo) * nsp;
  };

  // direct trace for the anchor slice
  {
    double t_from = g.time(ka);
    for (long idx = 0; idx < nsp; ++idx) {
      auto ix = g.unflat(idx);
      std::array<double, 3> x{0, 0, 0};
      for (int a = 0; a < g.d; ++a) x[a] = ix[a] * dxh;
      auto xf = trace_point(u, t_from, chart.ti, x, h_max);
      for (int a = 0; a < g.d; ++a) slice_ptr(a, ka)[idx] = xf[a] - x[a];
    }
  }

  // march outward, composing with the previous slice's displacement
  auto extend = [&](int k, int kprev) {
    std::vector<SpatialInterpolant> prev;
    for (int a = 0; a < g.d; ++a)
      prev.emplace_back(g.d, g.nx,
                        Vec(ConstVecMap(slice_ptr(a, kprev), nsp)));
    double t_from = g.time(k), t_to = g.time(kprev);
    for (long idx = 0; idx < nsp; ++idx) {
      auto ix = g.unflat(idx);
      std::array<double, 3> x{0, 0, 0};
      for (int a = 0; a < g.d; ++a) x[a] = ix[a] * dxh;
      auto y = trace_point(u, t_from, t_to, x, h_max);
      for (int a = 0; a < g.d; ++a)
        slice_ptr(a, k)[idx] = (y[a] - x[a]) + prev[a].eval(y);
    }
  };
  for (int k = ka + 1; k <= chart.k_hi; ++k) extend(k, k - 1);
  for (int k = ka - 1; k >= chart.k_lo; --k) extend(k, k + 1);
}

}  // namespace

InvGradSlice invgrad_slice(const FlowChart& chart, const Grid& g, SliceFFT& fft,
                           int k) {
  InvGradSlice out;
  if (chart.identity) return out;
  if (!chart.covers(k))
    throw std::runtime_error("invgrad_slice: slice outside chart range");
  out.identity = false;
  const int d = g.d;
  const long nsp = g.spatial_points();
  // grad Phi = Id + grad disp
  std::vector<Vec> grad(size_t(d) * d, Vec(nsp));
  MapSlice m = chart.map_slice(g, k);
  for (int r = 0; r < d; ++r) {
    Vec dr = ConstVecMap(m.disp[r], nsp);
    for (int c = 0; c < d; ++c) {
      slice_derivative(fft, dr.data(), grad[size_t(r) * d + c].data(), c, 1);
      if (r == c) grad[size_t(r) * d + c] += 1.0;
    }
  }
  out.entries.assign(size_t(d) * d, Vec(nsp));
  for (long i = 0; i < nsp; ++i) {
    if (d == 2) {
      double a = grad[0](i), b = grad[1](i), c = grad[2](i), e = grad[3](i);
      double det = a * e - b * c;
      out.max_det_err = std::max(out.max_det_err, std::abs(std::abs(det) - 1.0));
      double inv = 1.0 / det;
      double i00 = e * inv, i01 = -b * inv, i10 = -c * inv, i11 = a * inv;
      out.entries[0](i) = i00;
      out.entries[1](i) = i01;
      out.entries[2](i) = i10;
      out.entries[3](i) = i11;
      double dev = std::sqrt((i00 - 1) * (i00 - 1) + i01 * i01 + i10 * i10 +
                             (i11 - 1) * (i11 - 1));
      out.max_dev = std::max(out.max_dev, dev);
      double fro = std::sqrt(a * a + b * b + c * c + e * e);
      double froi = std::sqrt(i00 * i00 + i01 * i01 + i10 * i10 + i11 * i11);
      out.max_cond = std::max(out.max_cond, fro * froi / d);
    } else {
      Eigen::Matrix3d G;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) G(r, c) = grad[size_t(r) * 3 + c](i);
      double det = G.determinant();
      out.max_det_err = std::max(out.max_det_err, std::abs(std::abs(det) - 1.0));
      Eigen::Matrix3d Gi = G.inverse();
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out.entries[size_t(r) * 3 + c](i) = Gi(r, c);
      out.max_dev = std::max(
          out.max_dev, (Gi - Eigen::Matrix3d::Identity()).norm());
      out.max_cond = std::max(out.max_cond, G.norm() * Gi.norm() / d);
    }
  }
  return out;
}

double flow_stiffness(const SpaceTimeField& u) {
  const Grid& g = u.grid();
  SliceFFT fft(g);
  const long nsp = g.spatial_points();
  Vec der(nsp);
  double acc = 0;
  for (int k = 0; k < g.nt; ++k) {
    Vec fro = Vec::Zero(nsp);
    for (int c = 0; c < u.rank(); ++c) {
      auto s = u.slice(c, k);
      Vec sv = s;
      for (int a = 0; a < g.d; ++a) {
        slice_derivative(fft, sv.data(), der.data(), a, 1);
        fro += der.square();
      }
    }
    double w = (k == 0 || k == g.nt - 1) ? 0.5 * g.dt() : g.dt();
    acc += w * std::sqrt(fro.maxCoeff());
  }
  return acc;
}

ChartAtlas build_atlas(const SpaceTimeField& u, double nu, int lambda,
                       const FlowOptions& opts) {
  const Grid& g = u.grid();
  double Dreal = 1.0 / nu;
  int D = int(std::lround(Dreal));
  if (std::abs(Dreal - D) > 1e-9 || D < 1)
    throw std::invalid_argument("build_atlas: 1/nu must be a positive integer");

  // divergence-free precondition (relative to the gradient scale a
  // guard-respecting field can carry)
  {
    SpaceTimeField divu = divergence(u);
    double scale = std::max(1.0, kTwoPi * (g.nx / 8.0) * u.max_abs());
    if (divu.max_abs() > 1e-6 * scale)
      throw std::invalid_argument("build_atlas: u is not divergence-free");
  }

  ChartAtlas atlas;
  atlas.grid = g;
  atlas.nu = nu;
  atlas.D = D;
  atlas.lambda = lambda;
  atlas.zeta = ZetaPartition(nu, D, lambda);
  atlas.frozen = opts.frozen;

  bool u_zero = u.max_abs() < 1e-14;
  std::optional<SpaceTimeInterpolant> uip;
  if (!opts.frozen && !u_zero) uip.emplace(u);

  const double h_max = std::min(nu / 16.0, 1.0 / g.nt);
  SliceFFT fft(g);

  for (int i = 0; i < D; ++i) {
    FlowChart chart;
    chart.i = i;
    chart.t0 = i * nu;
    chart.t1 = (i + 1) * nu;
    chart.ti = (i + 0.5) * nu;
    double lo = atlas.zeta.support_lo(i), hi = atlas.zeta.support_hi(i);
    chart.k_lo = std::max(0, int(std::floor(lo / g.dt())) - opts.stencil_margin);
    chart.k_hi =
        std::min(g.nt - 1, int(std::ceil(hi / g.dt())) + opts.stencil_margin);
    chart.identity = opts.frozen || u_zero;
    if (!chart.identity) {
      trace_chart(chart, g, *uip, h_max);
      for (int k = chart.k_lo; k <= chart.k_hi; ++k) {
        InvGradSlice ig = invgrad_slice(chart, g, fft, k);
        double t = g.time(k);
        bool in_support = t >= lo - 1e-12 && t <= hi + 1e-12;
        if (in_support) {
          // the closeness contract is over supp zeta_i; the stencil-margin
          // slices only feed time differences
          chart.max_det_err = std::max(chart.max_det_err, ig.max_det_err);
          chart.max_invgrad_dev = std::max(chart.max_invgrad_dev, ig.max_dev);
        }
        chart.max_cond = std::max(chart.max_cond, ig.max_cond);
      }
      if (chart.max_cond > opts.cond_limit)
        throw std::runtime_error("build_atlas: chart failure (condition " +
                                 std::to_string(chart.max_cond) + " at chart " +
                                 std::to_string(i) + ")");
    }
    atlas.charts.push_back(std::move(chart));
  }
  return atlas;
}

double inverse_map_divergence_check(const FlowChart& chart, const Grid& g,
                                    const SpaceTimeField& G) {
  SliceFFT fft(g);
  const long nsp = g.spatial_points();
  const int d = g.d;
  // interpolants of G components and of div G
  std::vector<SpatialInterpolant> gip;
  for (int c = 0; c < d; ++c) gip.emplace_back(d, g.nx, Vec(G.slice(c, 0)));
  Vec divg(nsp), tmp(nsp);
  divg.setZero();
  for (int c = 0; c < d; ++c) {
    Vec sv = G.slice(c, 0);
    slice_derivative(fft, sv.data(), tmp.data(), c, 1);
    divg += tmp;
  }
  SpatialInterpolant divg_ip(d, g.nx, divg);

  double worst = 0;
  for (int k = chart.k_lo; k <= chart.k_hi; ++k) {
    MapSlice phi = chart.map_slice(g, k);
    InvGradSlice ig = invgrad_slice(chart, g, fft, k);
    std::vector<Vec> gphi(d, Vec(nsp));
    for (int c = 0; c < d; ++c)
      compose_slice(gip[c], 1.0, g, phi, gphi[c].data());
    Vec div_lhs = Vec::Zero(nsp);
    Vec comp(nsp);
    for (int r = 0; r < d; ++r) {
      if (ig.identity) {
        comp = gphi[r];
      } else {
        comp.setZero();
        for (int c = 0; c < d; ++c)
          comp += ConstVecMap(ig.entry(r, c, d), nsp) * gphi[c];
      }
      slice_derivative(fft, comp.data(), tmp.data(), r, 1);
      div_lhs += tmp;
    }
    Vec rhs(nsp);
    compose_slice(divg_ip, 1.0, g, phi, rhs.data());
    worst = std::max(worst, (div_lhs - rhs).abs().maxCoeff());
  }
  return worst;
}

void improved_anti_div_slice(SliceFFT& fft, const Vec& f_slice,
                             const SpatialInterpolant& g, int sigma,
                             const MapSlice& phi, std::vector<double*> out) {
  const Grid& gr = fft.grid();
  Vec composed(gr.spatial_points());
  compose_slice(g, double(sigma), gr, phi, composed.data());
  composed *= f_slice;
  slice_anti_divergence(fft, composed.data(), out);
}

}  // namespace citl
