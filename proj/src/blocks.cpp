#include "citl/blocks.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

#include "citl/norms.hpp"
#include "citl/spectral_ops.hpp"

namespace citl {

double conjugate_exponent(double x) {
  if (x == 1.0) return kInf;
  if (x == kInf) return 1.0;
  return x / (x - 1.0);
}

namespace {

int wavenum(int j, int n) { return (j <= n / 2) ? j : j - n; }

// m-dim (m = 1 or 2) spectral anti-divergence on the fine cross-section cell:
// returns Omega with div Omega = f - mean(f), Omega = grad lap^{-1} f.
std::vector<Vec> cross_section_anti_div(const Vec& f, int m, int nf) {
  using cd = std::complex<double>;
  Eigen::FFT<double> fft;
  long nsp = (m == 1) ? nf : long(nf) * nf;
  CVec spec(nsp);
  for (long i = 0; i < nsp; ++i) spec(i) = f(i);
  // forward along each axis
  {
    CVec in(nf), out(nf);
    for (int axis = 0; axis < m; ++axis) {
      long stride = (axis == m - 1) ? 1 : nf;
      long nlines = nsp / nf;
      for (long line = 0; line < nlines; ++line) {
        long outer = line / stride, inner = line % stride;
        long base = outer * stride * nf + inner;
        for (int jj = 0; jj < nf; ++jj) in(jj) = spec(base + jj * stride);
        fft.fwd(out.data(), in.data(), nf);
        for (int jj = 0; jj < nf; ++jj) spec(base + jj * stride) = out(jj);
      }
    }
  }
  std::vector<CVec> comps(m, CVec(nsp));
  for (long i = 0; i < nsp; ++i) {
    int k0, k1 = 0;
    if (m == 1) {
      k0 = wavenum(int(i), nf);
    } else {
      k0 = wavenum(int(i / nf), nf);
      k1 = wavenum(int(i % nf), nf);
    }
    double k2 = double(k0) * k0 + double(k1) * k1;
    bool nyq = (k0 == nf / 2) || (m == 2 && k1 == nf / 2);
    if (k2 == 0 || nyq) {
      for (int a = 0; a < m; ++a) comps[a](i) = 0;
      continue;
    }
    cd base = spec(i) / (-kTwoPi * k2);
    comps[0](i) = base * cd(0.0, double(k0));
    if (m == 2) comps[1](i) = base * cd(0.0, double(k1));
  }
  std::vector<Vec> out(m, Vec(nsp));
  {
    CVec in(nf), outl(nf);
    for (int a = 0; a < m; ++a) {
      for (int axis = 0; axis < m; ++axis) {
        long stride = (axis == m - 1) ? 1 : nf;
        long nlines = nsp / nf;
        for (long line = 0; line < nlines; ++line) {
          long outer = line / stride, inner = line % stride;
          long base = outer * stride * nf + inner;
          for (int jj = 0; jj < nf; ++jj) in(jj) = comps[a](base + jj * stride);
          fft.inv(outl.data(), in.data(), nf);
          for (int jj = 0; jj < nf; ++jj) comps[a](base + jj * stride) = outl(jj);
        }
      }
      for (long i = 0; i < nsp; ++i) out[a](i) = comps[a](i).real();
    }
  }
  return out;
}

// spectral divergence of cross-section components, for the build-time check
Vec cross_section_div(const std::vector<Vec>& omega, int m, int nf) {
  using cd = std::complex<double>;
  Eigen::FFT<double> fft;
  long nsp = (m == 1) ? nf : long(nf) * nf;
  CVec acc = CVec::Zero(nsp);
  CVec spec(nsp), in(nf), outl(nf);
  for (int a = 0; a < m; ++a) {
    for (long i = 0; i < nsp; ++i) spec(i) = omega[a](i);
    for (int axis = 0; axis < m; ++axis) {
      long stride = (axis == m - 1) ? 1 : nf;
      long nlines = nsp / nf;
      for (long line = 0; line < nlines; ++line) {
        long outer = line / stride, inner = line % stride;
        long base = outer * stride * nf + inner;
        for (int jj = 0; jj < nf; ++jj) in(jj) = spec(base + jj * stride);
        fft.fwd(outl.data(), in.data(), nf);
        for (int jj = 0; jj < nf; ++jj) spec(base + jj * stride) = outl(jj);
      }
    }
    for (long i = 0; i < nsp; ++i) {
      int k0, k1 = 0;
      if (m == 1) {
        k0 = wavenum(int(i), nf);
      } else {
        k0 = wavenum(int(i / nf), nf);
        k1 = wavenum(int(i % nf), nf);
      }
      int ka = (a == 0) ? k0 : k1;
      bool nyq = (k0 == nf / 2) || (m == 2 && k1 == nf / 2);
      acc(i) += nyq ? cd(0, 0) : spec(i) * cd(0.0, kTwoPi * ka);
    }
  }
  for (int axis = 0; axis < m; ++axis) {
    long stride = (axis == m - 1) ? 1 : nf;
    long nlines = nsp / nf;
    for (long line = 0; line < nlines; ++line) {
      long outer = line / stride, inner = line % stride;
      long base = outer * stride * nf + inner;
      for (int jj = 0; jj < nf; ++jj) in(jj) = acc(base + jj * stride);
      fft.inv(outl.data(), in.data(), nf);
      for (int jj = 0; jj < nf; ++jj) acc(base + jj * stride) = outl(jj);
    }
  }
  Vec out(nsp);
  for (long i = 0; i < nsp; ++i) out(i) = acc(i).real();
  return out;
}

// zero all spectral content above |k| = kcut, in place
void cross_section_lowpass(Vec& f, int m, int nf, int kcut) {
  Eigen::FFT<double> fft;
  long nsp = (m == 1) ? nf : long(nf) * nf;
  CVec spec(nsp);
  for (long i = 0; i < nsp; ++i) spec(i) = f(i);
  CVec in(nf), outl(nf);
  for (int axis = 0; axis < m; ++axis) {
    long stride = (axis == m - 1) ? 1 : nf;
    long nlines = nsp / nf;
    for (long line = 0; line < nlines; ++line) {
      long outer = line / stride, inner = line % stride;
      long base = outer * stride * nf + inner;
      for (int jj = 0; jj < nf; ++jj) in(jj) = spec(base + jj * stride);
      fft.fwd(outl.data(), in.data(), nf);
      for (int jj = 0; jj < nf; ++jj) spec(base + jj * stride) = outl(jj);
    }
  }
  for (long i = 0; i < nsp; ++i) {
    int k0, k1 = 0;
    if (m == 1) {
      k0 = wavenum(int(i), nf);
    } else {
      k0 = wavenum(int(i / nf), nf);
      k1 = wavenum(int(i % nf), nf);
    }
    if (std::abs(k0) > kcut || std::abs(k1) > kcut) spec(i) = 0;
  }
  for (int axis = 0; axis < m; ++axis) {
    long stride = (axis == m - 1) ? 1 : nf;
    long nlines = nsp / nf;
    for (long line = 0; line < nlines; ++line) {
      long outer = line / stride, inner = line % stride;
      long base = outer * stride * nf + inner;
      for (int jj = 0; jj < nf; ++jj) in(jj) = spec(base + jj * stride);
      fft.inv(outl.data(), in.data(), nf);
      for (int jj = 0; jj < nf; ++jj) spec(base + jj * stride) = outl(jj);
    }
  }
  for (long i = 0; i < nsp; ++i) f(i) = spec(i).real();
}

int fine_resolution(int m, double mu) {
  if (m == 1) {
    int nf = int(std::ceil(192.0 * mu / 2.0)) * 2;
    return std::min(std::max(nf, 512), 16384);
  }
  int nf = int(std::ceil(48.0 * mu)) * 2;
  return std::min(std::max(nf, 192), 768);
}

}  // namespace

MikadoTriple build_mikado(int j, double mu, int sigma, double p, int d,
                          const Grid& coarse_guard,
                          const BlockProfileParams& prof) {
  if (j < 1 || j > d) throw std::invalid_argument("build_mikado: j in 1..d");
  if (mu < 1.0) throw std::invalid_argument("build_mikado: mu >= 1");
  if (sigma < 1) throw std::invalid_argument("build_mikado: sigma >= 1");
  check_spatial_guard(coarse_guard, double(sigma) * mu, "build_mikado");

  MikadoTriple t;
  t.j = j;
  t.axis = j - 1;
  t.d = d;
  t.mu = mu;
  t.sigma = sigma;
  t.p = p;
  t.m = d - 1;
  int pi = 0;
  for (int a = 0; a < d; ++a)
    if (a != t.axis) t.perp[pi++] = a;
  t.center = double(j) / (2.0 * d);
  t.nf = fine_resolution(t.m, mu);

  ZeroMeanProfile q = ZeroMeanProfile::make(prof.sup_half, prof.inner_frac,
                                            prof.ramp_frac);
  const double split = 1.0 / std::sqrt(q.l2sq());
  const double pp = conjugate_exponent(p);
  const double amp_theta = std::pow(mu, (d - 1) / p);
  const double amp_w = (pp == kInf) ? 1.0 : std::pow(mu, (d - 1) / pp);

  const long nsp = (t.m == 1) ? t.nf : long(t.nf) * t.nf;
  t.theta_cs.resize(nsp);
  t.w_cs.resize(nsp);
  for (long i = 0; i < nsp; ++i) {
    double z0, z1 = 0;
    if (t.m == 1) {
      z0 = double(i) / t.nf;
    } else {
      z0 = double(i / t.nf) / t.nf;
      z1 = double(i % t.nf) / t.nf;
    }
    auto wrap = [](double z) { return z - std::round(z); };
    double prod = split * q.value_raw(mu * wrap(z0));
    if (t.m == 2) prod *= split * q.value_raw(mu * wrap(z1));
    t.theta_cs(i) = amp_theta * prod;
    t.w_cs(i) = amp_w * prod;
  }
  // band-limit the sampled profiles (their analytic tail above the cut is
  // negligible, and the potential identity then holds to roundoff), then
  // exact zero mean on the fine cell and int Theta*W = 1
  cross_section_lowpass(t.theta_cs, t.m, t.nf, t.nf / 3);
  cross_section_lowpass(t.w_cs, t.m, t.nf, t.nf / 3);
  t.theta_cs -= t.theta_cs.mean();
  t.w_cs -= t.w_cs.mean();
  double I = (t.theta_cs * t.w_cs).mean();
  if (!(I > 0))
    throw std::runtime_error("build_mikado: degenerate profile normalization");
  t.theta_cs /= std::sqrt(I);
  t.w_cs /= std::sqrt(I);
  t.tw_cs = t.theta_cs * t.w_cs;
  t.int_theta_w = t.tw_cs.mean();
  t.mean_theta = std::abs(t.theta_cs.mean());
  t.mean_w = std::abs(t.w_cs.mean());
  if (std::abs(t.int_theta_w - 1.0) > 1e-6)
    throw std::runtime_error("build_mikado: normalization failure");

  t.omega_cs = cross_section_anti_div(t.theta_cs, t.m, t.nf);
  Vec div = cross_section_div(t.omega_cs, t.m, t.nf);
  t.div_omega_err = (div - t.theta_cs).abs().maxCoeff() /
                    std::max(1e-300, t.theta_cs.abs().maxCoeff());

  t.theta_ip = SpatialInterpolant(t.m, t.nf, t.theta_cs);
  t.w_ip = SpatialInterpolant(t.m, t.nf, t.w_cs);
  t.tw_ip = SpatialInterpolant(t.m, t.nf, t.tw_cs);
  for (int a = 0; a < t.m; ++a)
    t.omega_ip.emplace_back(t.m, t.nf, t.omega_cs[a]);
  return t;
}

double TemporalTriple::gbar(double t) const {
  double z = lambda * t - center;
  z -= std::round(z);
  return amp_bar * q.value_raw(kappa * z);
}
double TemporalTriple::gtilde(double t) const {
  double z = lambda * t - center;
  z -= std::round(z);
  return amp_tilde * q.value_raw(kappa * z);
}
double TemporalTriple::dgbar(double t) const {
  double z = lambda * t - center;
  z -= std::round(z);
  return amp_bar * lambda * kappa * q.derivative_raw(kappa * z);
}
double TemporalTriple::dgtilde(double t) const {
  double z = lambda * t - center;
  z -= std::round(z);
  return amp_tilde * lambda * kappa * q.derivative_raw(kappa * z);
}

TemporalTriple build_temporal(int j, double kappa, int lambda, double s, int nt,
                              int d, const BlockProfileParams& prof) {
  if (kappa < 1.0) throw std::invalid_argument("build_temporal: kappa >= 1");
  if (lambda < 1) throw std::invalid_argument("build_temporal: lambda >= 1");
  if (lambda * kappa > nt / 8.0 + 1e-9)
    throw std::runtime_error(
        "Nyquist guard (temporal): build_temporal needs lambda*kappa <= nt/8");

  TemporalTriple t;
  t.j = j;
  t.kappa = kappa;
  t.lambda = lambda;
  t.s = s;
  t.center = (j - 0.5) / d;
  t.q = ZeroMeanProfile::make(prof.sup_half, prof.inner_frac, prof.ramp_frac);
  const double split = 1.0 / std::sqrt(t.q.l2sq());
  const double sp = conjugate_exponent(s);
  t.amp_bar = ((sp == kInf) ? 1.0 : std::pow(kappa, 1.0 / sp)) * split;
  t.amp_tilde = std::pow(kappa, 1.0 / s) * split;

  // normalize int_0^1 gbar gtilde = 1 by quadrature
  int nsub = lambda * std::max(128, 96 * int(std::ceil(kappa)));
  double I = quad_gl5([&t](double x) { return t.gbar(x) * t.gtilde(x); }, 0.0,
                      1.0, nsub);
  if (!(I > 0)) throw std::runtime_error("build_temporal: normalization failure");
  t.amp_bar /= std::sqrt(I);
  t.amp_tilde /= std::sqrt(I);
  t.int_gbar_gtilde =
      quad_gl5([&t](double x) { return t.gbar(x) * t.gtilde(x); }, 0.0, 1.0, nsub);
  if (std::abs(t.int_gbar_gtilde - 1.0) > 1e-8)
    throw std::runtime_error("build_temporal: normalization failure");

  // h(t) = lambda * int_0^t (gbar gtilde - 1), cumulative per grid interval
  t.h.resize(nt);
  t.h(0) = 0;
  const double dt = 1.0 / (nt - 1);
  int per = std::max(2, int(std::ceil(128.0 * lambda * kappa * dt)));
  double run = 0, hmax = 0;
  for (int k = 1; k < nt; ++k) {
    double a = (k - 1) * dt, b = k * dt;
    // track extrema inside the interval too
    for (int q2 = 1; q2 <= 4; ++q2) {
      double mid = a + (b - a) * q2 / 4.0;
      double part = quad_gl5(
          [&t](double x) { return t.gbar(x) * t.gtilde(x) - 1.0; }, a, mid, per);
      hmax = std::max(hmax, std::abs(lambda * (run + part)));
    }
    run += quad_gl5([&t](double x) { return t.gbar(x) * t.gtilde(x) - 1.0; }, a,
                    b, per);
    t.h(k) = lambda * run;
    hmax = std::max(hmax, std::abs(t.h(k)));
  }
  t.h_sup = hmax;
  return t;
}

double measure_block_norm(const MikadoTriple& t, const std::string& field, int m,
                          double r) {
  // self-scaled coarse grid resolving sigma*mu
  int need = int(std::ceil(16.0 * t.sigma * t.mu / 16.0)) * 16;
  int nx = std::max(64, need);
  Grid g(t.d, nx, 8);
  const long nsp = g.spatial_points();
  SliceFFT fft(g);

  int ncomp = (field == "Omega") ? t.d : 1;
  std::vector<Vec> comps;
  for (int c = 0; c < ncomp; ++c) {
    Vec slice(nsp);
    MapSlice id;
    if (field == "Theta")
      compose_slice(MikadoTriple::ThetaFn{&t}, t.sigma, g, id, slice.data());
    else if (field == "W")
      compose_slice(MikadoTriple::WFn{&t}, t.sigma, g, id, slice.data());
    else if (field == "TW")
      compose_slice(MikadoTriple::TwFn{&t}, t.sigma, g, id, slice.data());
    else if (field == "Omega")
      compose_slice(MikadoTriple::OmegaFn{&t, c}, t.sigma, g, id, slice.data());
    else
      throw std::invalid_argument("measure_block_norm: unknown field " + field);
    comps.push_back(std::move(slice));
  }

  // Frobenius magnitude of the m-th derivative tensor
  auto fact = [](int n) {
    double v = 1;
    for (int i = 2; i <= n; ++i) v *= i;
    return v;
  };
  Vec mag2 = Vec::Zero(nsp);
  Vec der(nsp);
  if (m == 0) {
    for (const auto& c : comps) mag2 += c.square();
  } else {
    std::vector<std::array<int, 3>> alphas;
    if (g.d == 2) {
      for (int a = 0; a <= m; ++a) alphas.push_back({a, m - a, 0});
    } else {
      for (int a = 0; a <= m; ++a)
        for (int b = 0; b <= m - a; ++b) alphas.push_back({a, b, m - a - b});
    }
    for (const auto& al : alphas) {
      double w = fact(m) / (fact(al[0]) * fact(al[1]) * fact(al[2]));
      for (const auto& c : comps) {
        Vec tmp = c;
        for (int a = 0; a < g.d; ++a)
          if (al[a] > 0) {
            slice_derivative(fft, tmp.data(), der.data(), a, al[a]);
            tmp = der;
          }
        mag2 += w * tmp.square();
      }
    }
  }
  return lp_norm_slice(mag2.sqrt(), r);
}

std::vector<ScalingRow> mikado_scaling_report(
    int d, double p, const std::vector<double>& mu_sweep, int sigma_fixed,
    const std::vector<int>& sigma_sweep, double mu_fixed,
    const std::vector<double>& r_list, const std::vector<int>& m_list,
    const BlockProfileParams& prof) {
  if (mu_sweep.size() < 4 && sigma_sweep.size() < 4)
    throw std::invalid_argument("mikado_scaling_report: under-resolved sweep");
  std::vector<ScalingRow> rows;
  const double pp = conjugate_exponent(p);
  Grid guard(d, 4096, 8);  // permissive guard grid; measurement grids self-scale

  auto predicted_mu = [&](const std::string& f, int m, double r) {
    double dr = (r == kInf) ? 0.0 : (d - 1) / r;
    if (f == "Theta") return m + (d - 1) / p - dr;
    if (f == "W") return m + ((pp == kInf) ? 0.0 : (d - 1) / pp) - dr;
    return m - 1 + (d - 1) / p - dr;  // Omega
  };

  for (const std::string& f : {std::string("Theta"), std::string("W"),
                               std::string("Omega")}) {
    for (int m : m_list)
      for (double r : r_list) {
        if (mu_sweep.size() >= 4) {
          std::vector<double> xs, ys;
          for (double mu : mu_sweep) {
            MikadoTriple t = build_mikado(1, mu, sigma_fixed, p, d, guard, prof);
            xs.push_back(mu);
            ys.push_back(measure_block_norm(t, f, m, r));
          }
          auto fit = fit_loglog(xs, ys);
          rows.push_back({f, "mu", m, r, predicted_mu(f, m, r), fit.slope,
                          fit.max_residual});
        }
        if (sigma_sweep.size() >= 4) {
          std::vector<double> xs, ys;
          for (int s : sigma_sweep) {
            MikadoTriple t = build_mikado(1, mu_fixed, s, p, d, guard, prof);
            xs.push_back(double(s));
            ys.push_back(measure_block_norm(t, f, m, r));
          }
          auto fit = fit_loglog(xs, ys);
          rows.push_back({f, "sigma", m, r, double(m), fit.slope,
                          fit.max_residual});
        }
      }
  }
  return rows;
}

std::vector<ScalingRow> temporal_scaling_report(
    double s, const std::vector<double>& kappa_sweep, int lambda_fixed,
    const std::vector<double>& r_list, const std::vector<int>& m_list,
    const BlockProfileParams& prof) {
  if (kappa_sweep.size() < 4)
    throw std::invalid_argument("temporal_scaling_report: under-resolved sweep");
  std::vector<ScalingRow> rows;
  const double sp = conjugate_exponent(s);

  auto measure = [&](const TemporalTriple& t, bool bar, int m, double r) {
    auto f = [&](double x) {
      double v = bar ? (m == 0 ? t.gbar(x) : t.dgbar(x))
                     : (m == 0 ? t.gtilde(x) : t.dgtilde(x));
      return v;
    };
    int nsub = t.lambda * std::max(256, 64 * int(std::ceil(t.kappa)));
    if (r == kInf) {
      double mx = 0;
      for (int i = 0; i <= nsub; ++i)
        mx = std::max(mx, std::abs(f(double(i) / nsub)));
      return mx;
    }
    double I =
        quad_gl5([&](double x) { return std::pow(std::abs(f(x)), r); }, 0, 1, nsub);
    return std::pow(I, 1.0 / r);
  };

  for (bool bar : {true, false})
    for (int m : m_list)
      for (double r : r_list) {
        if (m > 1)
          throw std::invalid_argument("temporal_scaling_report: m <= 1 supported");
        std::vector<double> xs, ys;
        for (double kap : kappa_sweep) {
          int nt_need = int(std::ceil(8.0 * lambda_fixed * kap)) + 8;
          TemporalTriple t =
              build_temporal(1, kap, lambda_fixed, s, nt_need, 2, prof);
          xs.push_back(kap);
          ys.push_back(measure(t, bar, m, r));
        }
        auto fit = fit_loglog(xs, ys);
        double rinv = (r == kInf) ? 0.0 : 1.0 / r;
        double pred = bar ? (m + ((sp == kInf) ? 0.0 : 1.0 / sp) - rinv)
                          : (m + 1.0 / s - rinv);
        rows.push_back({bar ? "gbar" : "gtilde", "kappa", m, r, pred, fit.slope,
                        fit.max_residual});
      }
  return rows;
}

}  // namespace citl
