#include "citl/perturb.hpp"

#include <cmath>

#include "citl/norms.hpp"
#include "citl/rng.hpp"

namespace citl {

namespace {

// 4th-order first-derivative stencil constrained to [klo, khi]
void local_time_stencil(int k, int klo, int khi, int* off, double* c) {
  static const double ci[5] = {1, -8, 0, 8, -1};
  static const double cf0[5] = {-25, 48, -36, 16, -3};
  static const double cf1[5] = {-3, -10, 18, -6, 1};
  static const double cb1[5] = {-1, 6, -18, 10, 3};
  static const double cb0[5] = {3, -16, 36, -48, 25};
  const double* cs;
  int o0;
  if (k - 2 >= klo && k + 2 <= khi) {
    cs = ci;
    o0 = k - 2;
  } else if (k == klo) {
    cs = cf0;
    o0 = k;
  } else if (k - 2 < klo) {
    cs = cf1;
    o0 = k - 1;
  } else if (k == khi) {
    cs = cb0;
    o0 = k - 4;
  } else {
    cs = cb1;
    o0 = k - 3;
  }
  for (int q = 0; q < 5; ++q) {
    off[q] = o0 + q;
    c[q] = cs[q];
  }
}

struct SliceScratch {
  Vec buf, buf2, sbuf;
  std::vector<Vec> grads, vout, vcomp;
  explicit SliceScratch(const Grid& g) {
    long n = g.spatial_points();
    buf.resize(n);
    buf2.resize(n);
    sbuf.resize(n);
    grads.assign(3, Vec(n));
    vout.assign(3, Vec(n));
    vcomp.assign(3, Vec(n));
  }
  std::vector<double*> grad_ptrs(int d) {
    std::vector<double*> p(d);
    for (int a = 0; a < d; ++a) p[a] = grads[a].data();
    return p;
  }
  std::vector<double*> vout_ptrs(int d) {
    std::vector<double*> p(d);
    for (int a = 0; a < d; ++a) p[a] = vout[a].data();
    return p;
  }
};

// [IG * Omega(sigma Phi)]_r for all r on one slice
void omega_column(const MikadoTriple& mk, int sigma, const Grid& g,
                  const MapSlice& phi, const InvGradSlice& ig,
                  SliceScratch& sc) {
  const int d = g.d;
  const long nsp = g.spatial_points();
  std::vector<Vec> om(d, Vec(nsp));
  for (int c = 0; c < d; ++c) {
    if (c == mk.axis) {
      om[c].setZero();
      continue;
    }
    compose_slice(MikadoTriple::OmegaFn{&mk, c}, double(sigma), g, phi,
                  om[c].data());
  }
  for (int r = 0; r < d; ++r) {
    if (ig.identity) {
      sc.vcomp[r] = om[r];
    } else {
      sc.vcomp[r].setZero();
      for (int c = 0; c < d; ++c)
        sc.vcomp[r] += ig.entries[size_t(r) * d + c] * om[c];
    }
  }
}

}  // namespace

void PerturbationBundle::consolidate() {
  if (consolidated) return;
  const Grid& g = theta_p.grid();
  for (int k = 0; k < g.nt; ++k) {
    theta_p.slice(0, k) += theta_c(k);
    theta_p.slice(0, k) += theta_o.slice(0, k);
  }
  theta_o.release();
  w_p += w_c;
  w_c.release();
  consolidated = true;
}

double PerturbationBundle::mean_violation() const {
  if (consolidated)
    throw std::logic_error("mean_violation: bundle already consolidated");
  const Grid& g = theta_p.grid();
  double worst = 0;
  for (int k = 0; k < g.nt; ++k)
    worst = std::max(worst, std::abs(theta_p.slice(0, k).mean() + theta_c(k)));
  return worst;
}

std::vector<SpaceTimeField> cutoff_products(const CutoffSet& cut,
                                            const SpaceTimeField& R) {
  const Grid& g = R.grid();
  std::vector<SpaceTimeField> P;
  for (int j = 0; j < g.d; ++j) {
    SpaceTimeField pj = SpaceTimeField::scalar(g);
    pj.comp(0) = cut.chi[j].comp(0).square() * R.comp(j);
    P.push_back(std::move(pj));
  }
  return P;
}

PerturbationBundle build_perturbation(const ChartAtlas& atlas,
                                      const CoefficientFields& cf,
                                      const std::vector<SpaceTimeField>& P,
                                      const std::vector<MikadoTriple>& mik,
                                      const std::vector<TemporalTriple>& tmp,
                                      double eta) {
  const Grid& g = P[0].grid();
  const int d = g.d;
  const long nsp = g.spatial_points();
  SliceFFT fft(g);
  SliceScratch sc(g);

  PerturbationBundle bd;
  bd.eta = eta;
  bd.theta_p = SpaceTimeField::scalar(g);
  bd.theta_o = SpaceTimeField::scalar(g);
  bd.w_p = SpaceTimeField::vector(g);
  bd.w_c = SpaceTimeField::vector(g);
  bd.theta_c = Vec::Zero(g.nt);

  // oscillation part of the density perturbation
  for (int j = 0; j < d; ++j) {
    const double inv_lambda = 1.0 / tmp[j].lambda;
    for (int k = 0; k < g.nt; ++k) {
      double hk = tmp[j].h(k);
      if (hk == 0.0) continue;
      Vec pj = P[j].slice(0, k);
      slice_derivative(fft, pj.data(), sc.buf.data(), mik[j].axis, 1);
      bd.theta_o.slice(0, k) += (inv_lambda * hk) * sc.buf;
    }
  }

  // principal and corrector parts, chart by chart
  for (const FlowChart& chart : atlas.charts) {
    for (int k = chart.k_lo; k <= chart.k_hi; ++k) {
      double t = g.time(k);
      double zeta = atlas.zeta.zeta(chart.i, t);
      if (zeta == 0.0) continue;
      MapSlice phi = chart.map_slice(g, k);
      InvGradSlice ig;
      bool have_ig = false;
      for (int j = 0; j < d; ++j) {
        if (!cf.active[j]) continue;
        double gt = tmp[j].gtilde(t);
        double gb = tmp[j].gbar(t);
        if (gt != 0.0) {
          compose_slice(MikadoTriple::ThetaFn{&mik[j]}, double(mik[j].sigma), g,
                        phi, sc.buf.data());
          bd.theta_p.slice(0, k) +=
              (eta * gt * zeta) * (cf.a[j].slice(0, k) * sc.buf);
        }
        if (gb != 0.0) {
          if (!have_ig && !chart.identity) {
            ig = invgrad_slice(chart, g, fft, k);
            have_ig = true;
          }
          compose_slice(MikadoTriple::WFn{&mik[j]}, double(mik[j].sigma), g, phi,
                        sc.buf.data());
          const double cw = gb * zeta / eta;
          for (int r = 0; r < d; ++r) {
            if (ig.identity) {
              if (r == mik[j].axis)
                bd.w_p.slice(r, k) += cw * (cf.b[j].slice(0, k) * sc.buf);
            } else {
              bd.w_p.slice(r, k) +=
                  cw * (cf.b[j].slice(0, k) *
                        ig.entries[size_t(r) * d + mik[j].axis] * sc.buf);
            }
          }
          // corrector: anti-divergence of grad b . [IG e_j] W(sigma Phi)
          Vec bslice = cf.b[j].slice(0, k);
          slice_gradient(fft, bslice.data(), sc.grad_ptrs(d));
          sc.sbuf.setZero();
          for (int r = 0; r < d; ++r) {
            if (ig.identity) {
              if (r == mik[j].axis) sc.sbuf += sc.grads[r];
            } else {
              sc.sbuf += sc.grads[r] * ig.entries[size_t(r) * d + mik[j].axis];
            }
          }
          sc.sbuf *= sc.buf;
          slice_anti_divergence(fft, sc.sbuf.data(), sc.vout_ptrs(d));
          for (int r = 0; r < d; ++r) bd.w_c.slice(r, k) -= cw * sc.vout[r];
        }
      }
    }
  }

  for (int k = 0; k < g.nt; ++k) bd.theta_c(k) = -bd.theta_p.slice(0, k).mean();
  (void)nsp;
  return bd;
}

namespace {

DefectStats component_stats(const std::string& name, const SpaceTimeField& f) {
  DefectStats s;
  s.name = name;
  s.l1 = l1_norm(f);
  s.linf = sup_norm(f);
  return s;
}

}  // namespace

DefectAssembler::DefectAssembler(
    const SpaceTimeField& rho, const SpaceTimeField& u, const SpaceTimeField& R,
    const ChartAtlas& atlas, const CoefficientFields& cf,
    const std::vector<SpaceTimeField>& P, const PerturbationBundle& bundle,
    const std::vector<MikadoTriple>& mik, const std::vector<TemporalTriple>& tmp,
    double eta, int sigma)
    : rho_(rho),
      u_(u),
      R_(R),
      atlas_(atlas),
      cf_(cf),
      P_(P),
      bundle_(bundle),
      mik_(mik),
      tmp_(tmp),
      eta_(eta),
      sigma_(sigma) {}

const std::vector<std::string>& DefectAssembler::component_names() {
  static const std::vector<std::string> names = {
      "R_lin",   "R_cor",  "R_trans", "R_osc_x",
      "R_osc_t", "R_rem",  "R_flow",  "R_interact"};
  return names;
}

SpaceTimeField DefectAssembler::component(const std::string& name) const {
  const Grid& g = R_.grid();
  const int d = g.d;
  const long nsp = g.spatial_points();
  SliceFFT fft(g);
  SliceScratch sc(g);
  SpaceTimeField comp = SpaceTimeField::vector(g);
  const double eta = eta_;
  const int sigma = sigma_;

  if (name == "R_lin") {
    if (bundle_.consolidated)
      throw std::logic_error("R_lin needs the unconsolidated bundle");
    for (int k = 0; k < g.nt; ++k) {
      auto to = bundle_.theta_o.slice(0, k);
      auto rh = rho_.slice(0, k);
      for (int r = 0; r < d; ++r)
        comp.slice(r, k) = to * u_.slice(r, k) +
                           rh * (bundle_.w_p.slice(r, k) + bundle_.w_c.slice(r, k));
    }
    return comp;
  }

  if (name == "R_cor") {
    if (bundle_.consolidated)
      throw std::logic_error("R_cor needs the unconsolidated bundle");
    for (int k = 0; k < g.nt; ++k) {
      Vec th = bundle_.theta_p.slice(0, k) + bundle_.theta_o.slice(0, k);
      th += bundle_.theta_c(k);
      Vec oc = bundle_.theta_o.slice(0, k) + bundle_.theta_c(k);
      for (int r = 0; r < d; ++r)
        comp.slice(r, k) =
            th * bundle_.w_c.slice(r, k) + oc * bundle_.w_p.slice(r, k);
    }
    return comp;
  }

  if (name == "R_trans") {
    const double inv_sigma = 1.0 / sigma;
    for (int j = 0; j < d; ++j) {
      if (!cf_.active[j]) continue;
      SpaceTimeField da = derivative(cf_.a[j], kTimeAxis, 1);
      for (const FlowChart& chart : atlas_.charts) {
        // composed density block over the chart range, for its material
        // derivative
        const int nk = chart.k_hi - chart.k_lo + 1;
        Vec tblock(long(nk) * nsp);
        for (int k = chart.k_lo; k <= chart.k_hi; ++k)
          compose_slice(MikadoTriple::ThetaFn{&mik_[j]}, double(sigma), g,
                        chart.map_slice(g, k),
                        tblock.data() + long(k - chart.k_lo) * nsp);
        auto tb = [&](int k) {
          return ConstVecMap(tblock.data() + long(k - chart.k_lo) * nsp, nsp);
        };

        for (int k = chart.k_lo; k <= chart.k_hi; ++k) {
          double t = g.time(k);
          double zeta = atlas_.zeta.zeta(chart.i, t);
          double dzeta = atlas_.zeta.dzeta(chart.i, t);
          double gt = tmp_[j].gtilde(t);
          double dgt = tmp_[j].dgtilde(t);
          if (zeta == 0.0 && dzeta == 0.0) continue;
          if (gt == 0.0 && dgt == 0.0) continue;
          MapSlice phi = chart.map_slice(g, k);
          InvGradSlice ig;
          if (!chart.identity) ig = invgrad_slice(chart, g, fft, k);

          Vec aslice = cf_.a[j].slice(0, k);
          Vec daslice = da.slice(0, k);

          if (zeta != 0.0) {
            omega_column(mik_[j], sigma, g, phi, ig, sc);
            // d_t(gtilde a), the temporal factor differentiated analytically
            sc.buf = dgt * aslice + gt * daslice;
            for (int r = 0; r < d; ++r)
              comp.slice(r, k) += (inv_sigma * eta * zeta) * (sc.buf * sc.vcomp[r]);

            // anti-divergence of d_t(gtilde grad a) . (zeta IG Omega(Phi))
            slice_gradient(fft, aslice.data(), sc.grad_ptrs(d));
            sc.sbuf.setZero();
            for (int r = 0; r < d; ++r)
              sc.sbuf += (dgt * zeta) * sc.grads[r] * sc.vcomp[r];
            slice_gradient(fft, daslice.data(), sc.grad_ptrs(d));
            for (int r = 0; r < d; ++r)
              sc.sbuf += (gt * zeta) * sc.grads[r] * sc.vcomp[r];
            slice_anti_divergence(fft, sc.sbuf.data(), sc.vout_ptrs(d));
            for (int r = 0; r < d; ++r)
              comp.slice(r, k) -= (inv_sigma * eta) * sc.vout[r];
          }

          if (gt != 0.0) {
            // transport part: gtilde [a dzeta + (u . grad a) zeta] Theta(Phi)
            // plus the material-derivative residual of the composed block
            slice_gradient(fft, aslice.data(), sc.grad_ptrs(d));
            sc.buf2.setZero();
            for (int r = 0; r < d; ++r) sc.buf2 += u_.slice(r, k) * sc.grads[r];
            sc.sbuf = gt * (dzeta * aslice + zeta * sc.buf2) * tb(k);
            if (zeta != 0.0) {
              // D_t of the composed block by the residual check's stencils
              const double inv12dt = 1.0 / (12.0 * g.dt());
              int off[5];
              double cst[5];
              local_time_stencil(k, chart.k_lo, chart.k_hi, off, cst);
              sc.buf.setZero();
              for (int q = 0; q < 5; ++q)
                if (cst[q] != 0.0) sc.buf += (cst[q] * inv12dt) * tb(off[q]);
              Vec tk = tb(k);
              slice_gradient(fft, tk.data(), sc.grad_ptrs(d));
              for (int r = 0; r < d; ++r) sc.buf += u_.slice(r, k) * sc.grads[r];
              sc.sbuf += (gt * zeta) * aslice * sc.buf;
            }
            slice_anti_divergence(fft, sc.sbuf.data(), sc.vout_ptrs(d));
            for (int r = 0; r < d; ++r) comp.slice(r, k) += eta * sc.vout[r];
          }
        }
      }
    }
    return comp;
  }

  if (name == "R_osc_x") {
    for (int j = 0; j < d; ++j) {
      if (!cf_.active[j]) continue;
      for (const FlowChart& chart : atlas_.charts) {
        for (int k = chart.k_lo; k <= chart.k_hi; ++k) {
          double t = g.time(k);
          double zeta = atlas_.zeta.zeta(chart.i, t);
          if (zeta == 0.0) continue;
          double gg = tmp_[j].gtilde(t) * tmp_[j].gbar(t);
          if (gg == 0.0) continue;
          MapSlice phi = chart.map_slice(g, k);
          InvGradSlice ig;
          if (!chart.identity) ig = invgrad_slice(chart, g, fft, k);
          compose_slice(MikadoTriple::TwFn{&mik_[j]}, double(sigma), g, phi,
                        sc.buf.data());
          sc.buf -= 1.0;
          Vec pj = P_[j].slice(0, k);
          slice_gradient(fft, pj.data(), sc.grad_ptrs(d));
          sc.sbuf.setZero();
          for (int r = 0; r < d; ++r) {
            if (ig.identity) {
              if (r == mik_[j].axis) sc.sbuf += sc.grads[r];
            } else {
              sc.sbuf += sc.grads[r] * ig.entries[size_t(r) * d + mik_[j].axis];
            }
          }
          sc.sbuf *= sc.buf;
          slice_anti_divergence(fft, sc.sbuf.data(), sc.vout_ptrs(d));
          for (int r = 0; r < d; ++r)
            comp.slice(r, k) -= (gg * zeta * zeta) * sc.vout[r];
        }
      }
    }
    return comp;
  }

  if (name == "R_osc_t") {
    for (int j = 0; j < d; ++j) {
      SpaceTimeField dP = derivative(P_[j], kTimeAxis, 1);
      const double inv_lambda = 1.0 / tmp_[j].lambda;
      for (int k = 0; k < g.nt; ++k) {
        double hk = tmp_[j].h(k);
        if (hk == 0.0) continue;
        comp.slice(j, k) += (inv_lambda * hk) * dP.slice(0, k);
      }
    }
    return comp;
  }

  if (name == "R_rem") {
    for (int j = 0; j < d; ++j) comp.comp(j) = R_.comp(j) - P_[j].comp(0);
    return comp;
  }

  if (name == "R_flow") {
    for (const FlowChart& chart : atlas_.charts) {
      if (chart.identity) continue;
      for (int k = chart.k_lo; k <= chart.k_hi; ++k) {
        double t = g.time(k);
        double zeta = atlas_.zeta.zeta(chart.i, t);
        if (zeta == 0.0) continue;
        InvGradSlice ig = invgrad_slice(chart, g, fft, k);
        for (int j = 0; j < d; ++j) {
          double gg = tmp_[j].gtilde(t) * tmp_[j].gbar(t);
          if (gg == 0.0) continue;
          Vec pj = P_[j].slice(0, k);
          for (int r = 0; r < d; ++r) {
            double idr = (r == mik_[j].axis) ? 1.0 : 0.0;
            comp.slice(r, k) +=
                (gg * zeta * zeta) *
                (pj * (idr - ig.entries[size_t(r) * d + mik_[j].axis]));
          }
        }
      }
    }
    return comp;
  }

  if (name == "R_interact") {
    for (int i = 0; i + 1 < atlas_.D; ++i) {
      const FlowChart& c0 = atlas_.charts[i];
      const FlowChart& c1 = atlas_.charts[i + 1];
      int klo = std::max(c0.k_lo, c1.k_lo), khi = std::min(c0.k_hi, c1.k_hi);
      for (int k = klo; k <= khi; ++k) {
        double t = g.time(k);
        double zz = atlas_.zeta.zeta(i, t) * atlas_.zeta.zeta(i + 1, t);
        if (zz == 0.0) continue;
        MapSlice p0 = c0.map_slice(g, k), p1 = c1.map_slice(g, k);
        InvGradSlice ig0, ig1;
        if (!c0.identity) ig0 = invgrad_slice(c0, g, fft, k);
        if (!c1.identity) ig1 = invgrad_slice(c1, g, fft, k);
        for (int j = 0; j < d; ++j) {
          double gg = tmp_[j].gtilde(t) * tmp_[j].gbar(t);
          if (gg == 0.0) continue;
          Vec w0(nsp), th1(nsp), w1(nsp), th0(nsp);
          compose_slice(MikadoTriple::WFn{&mik_[j]}, double(sigma), g, p0,
                        w0.data());
          compose_slice(MikadoTriple::ThetaFn{&mik_[j]}, double(sigma), g, p1,
                        th1.data());
          compose_slice(MikadoTriple::WFn{&mik_[j]}, double(sigma), g, p1,
                        w1.data());
          compose_slice(MikadoTriple::ThetaFn{&mik_[j]}, double(sigma), g, p0,
                        th0.data());
          Vec pj = P_[j].slice(0, k);
          const int ax = mik_[j].axis;
          for (int r = 0; r < d; ++r) {
            Vec term = Vec::Zero(nsp);
            if (ig0.identity) {
              if (r == ax) term += w0 * th1;
            } else {
              term += ig0.entries[size_t(r) * d + ax] * w0 * th1;
            }
            if (ig1.identity) {
              if (r == ax) term += w1 * th0;
            } else {
              term += ig1.entries[size_t(r) * d + ax] * w1 * th0;
            }
            comp.slice(r, k) -= (gg * zz) * (pj * term);
          }
        }
      }
    }
    return comp;
  }

  throw std::invalid_argument("DefectAssembler: unknown component " + name);
}

DefectBuildResult build_defect(const SpaceTimeField& rho,
                               const SpaceTimeField& u,
                               const SpaceTimeField& R, const ChartAtlas& atlas,
                               const CoefficientFields& cf,
                               const std::vector<SpaceTimeField>& P,
                               PerturbationBundle& bundle,
                               const std::vector<MikadoTriple>& mik,
                               const std::vector<TemporalTriple>& tmp,
                               double eta, int sigma) {
  DefectAssembler asmr(rho, u, R, atlas, cf, P, bundle, mik, tmp, eta, sigma);
  DefectBuildResult out;
  out.total = SpaceTimeField::vector(R.grid());
  for (const std::string& name : DefectAssembler::component_names()) {
    if (name == "R_trans") bundle.consolidate();  // corrections are done
    SpaceTimeField comp = asmr.component(name);
    out.stats.push_back(component_stats(name, comp));
    out.total += comp;
  }
  out.l1_total = l1_norm(out.total);
  return out;
}

CdeReport verify_cde(const SpaceTimeField& rho, const SpaceTimeField& u,
                     const SpaceTimeField& R, double osc_freq) {
  const Grid& g = rho.grid();
  const int d = g.d;
  SliceFFT fft(g);
  SpaceTimeField dtrho = derivative(rho, kTimeAxis, 1);
  CdeReport rep;
  Vec tmp(g.spatial_points()), res(g.spatial_points());
  Vec resl1(g.nt), divrl1(g.nt), fluxl1(g.nt);
  double linf = 0;
  for (int k = 0; k < g.nt; ++k) {
    res = dtrho.slice(0, k);
    double flux_acc = 0;
    for (int r = 0; r < d; ++r) {
      Vec prod = rho.slice(0, k) * u.slice(r, k);
      slice_derivative(fft, prod.data(), tmp.data(), r, 1);
      res += tmp;
      flux_acc += tmp.abs().mean();
    }
    Vec divr = Vec::Zero(g.spatial_points());
    for (int r = 0; r < d; ++r) {
      Vec rr = R.slice(r, k);
      slice_derivative(fft, rr.data(), tmp.data(), r, 1);
      divr += tmp;
    }
    res -= divr;
    resl1(k) = res.abs().mean();
    divrl1(k) = divr.abs().mean();
    fluxl1(k) = flux_acc;
    linf = std::max(linf, res.abs().maxCoeff());
  }
  double dt = g.dt();
  rep.residual_l1 = temporal_norm(resl1, 1.0, dt);
  rep.residual_linf = linf;
  rep.div_r_l1 = temporal_norm(divrl1, 1.0, dt);
  double fd_rel =
      (osc_freq > 0) ? std::pow(kTwoPi * osc_freq * dt, 4) / 30.0 : 0.0;
  Vec dtl1(g.nt);
  for (int k = 0; k < g.nt; ++k) dtl1(k) = dtrho.slice(0, k).abs().mean();
  rep.floor_l1 = fd_rel * temporal_norm(dtl1, 1.0, dt) +
                 1e-8 * (temporal_norm(fluxl1, 1.0, dt) + rep.div_r_l1);
  return rep;
}

Prop31Report verify_prop31(const SpaceTimeField& theta, const SpaceTimeField& w,
                           const SpaceTimeField& R_old, double r1_l1,
                           const StepParams& prm) {
  const Grid& g = theta.grid();
  Prop31Report rep;
  rep.delta = prm.delta;
  rep.N = prm.N;
  rep.r1_l1 = r1_l1;
  const double sp = conjugate_exponent(prm.s);
  const double pp = conjugate_exponent(prm.p);
  double r_l1 = l1_norm(R_old);
  double th_norm = lpq_norm(theta, prm.s, prm.p);
  double w_norm = lpq_norm(w, sp, pp);
  rep.m1 = th_norm / std::max(1e-300, prm.eta * std::pow(r_l1, 1.0 / prm.p));
  rep.m2 = w_norm * prm.eta /
           std::max(1e-300, (pp == kInf) ? 1.0 : std::pow(r_l1, 1.0 / pp));
  if (pp == kInf) rep.m2 = w_norm * prm.eta;
  rep.measured_M = std::max(rep.m1, rep.m2);
  rep.w_w1p = w1p_mixed_norm(w, prm.st, prm.pt);

  // mean-value battery: 20 fixed test functions
  std::vector<TrigPoly> battery;
  {
    TrigPoly cst;
    cst.d = g.d;
    TrigPoly::Mode m0;
    m0.amp = 1.0;
    m0.use_cos = true;  // cos(0) = 1
    cst.modes.push_back(m0);
    battery.push_back(cst);
    std::vector<std::array<int, 3>> ks;
    if (g.d == 2)
      ks = {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, -1, 0}, {2, 0, 0},
            {0, 2, 0}, {2, 1, 0}, {1, 2, 0}, {2, 2, 0}};
    else
      ks = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1},
            {0, 1, 1}, {1, 1, 1}, {2, 0, 0}, {0, 2, 0}};
    for (const auto& k : ks)
      for (bool use_cos : {false, true}) {
        TrigPoly p;
        p.d = g.d;
        TrigPoly::Mode m;
        m.k = k;
        m.amp = 1.0;
        m.use_cos = use_cos;
        p.modes.push_back(m);
        battery.push_back(p);
      }
    std::mt19937_64 rng(prm.seed);
    battery.push_back(TrigPoly::random(g.d, 2, 6, rng));
  }
  const long nsp = g.spatial_points();
  Vec phi_s(nsp);
  double worst = 0;
  for (const TrigPoly& phi : battery) {
    for (long i = 0; i < nsp; ++i) {
      auto ix = g.unflat(i);
      std::array<double, 3> x{0, 0, 0};
      for (int a = 0; a < g.d; ++a) x[a] = double(ix[a]) / g.nx;
      phi_s(i) = phi.eval(x);
    }
    // ||phi||_{C^N} lower bound: sup of phi and of its order-N single-axis
    // derivatives on the grid
    double cn = phi_s.abs().maxCoeff();
    for (int a = 0; a < g.d; ++a) {
      double mx = 0;
      for (long i = 0; i < nsp; i += std::max<long>(1, nsp / 4096)) {
        auto ix = g.unflat(i);
        std::array<double, 3> x{0, 0, 0};
        for (int aa = 0; aa < g.d; ++aa) x[aa] = double(ix[aa]) / g.nx;
        mx = std::max(mx, std::abs(phi.eval_axis_derivative(x, a, prm.N)));
      }
      cn = std::max(cn, mx);
    }
    for (int k = 0; k < g.nt; ++k) {
      double integral = (theta.slice(0, k) * phi_s).mean();
      worst = std::max(worst, std::abs(integral) / (prm.delta * cn));
    }
  }
  rep.mean_test_worst = worst;

  // temporal support: theta must vanish outside I_{r/2}
  rep.r_eff = prm.r / 2.0;
  double viol = 0;
  for (int k = 0; k < g.nt; ++k) {
    double t = g.time(k);
    if (t < rep.r_eff || t > 1.0 - rep.r_eff)
      viol = std::max(viol, theta.slice(0, k).abs().maxCoeff());
  }
  rep.supp_violation = viol;
  return rep;
}

DiffusionResult diffusion_defect(const ChartAtlas& atlas,
                                 const CoefficientFields& cf,
                                 const std::vector<SpaceTimeField>& P,
                                 const std::vector<MikadoTriple>& mik,
                                 const std::vector<TemporalTriple>& tmp,
                                 double eta, int sigma,
                                 const ConstCoeffOperator& lk,
                                 const SpaceTimeField& theta_total) {
  const Grid& g = theta_total.grid();
  const int d = g.d;
  const long nsp = g.spatial_points();
  check_spatial_guard(g, double(sigma) * mik[0].mu, "diffusion_defect");
  SliceFFT fft(g);
  SliceScratch sc(g);

  // slice-level symbol of L_k
  CVec sym(nsp);
  {
    using cd = std::complex<double>;
    for (long i = 0; i < nsp; ++i) {
      auto kv = fft.wavevec(i);
      bool nyq = false;
      for (int a = 0; a < d; ++a)
        if (kv[a] == g.nx / 2) nyq = true;
      if (nyq) {
        sym(i) = 0;
        continue;
      }
      cd v(0, 0);
      for (const auto& t : lk.terms) {
        cd term(t.coeff, 0);
        for (int a = 0; a < d; ++a)
          if (t.alpha[a] > 0)
            term *= std::pow(cd(0.0, kTwoPi * kv[a]), t.alpha[a]);
        v += term;
      }
      sym(i) = v;
    }
  }
  CVec spec;
  auto apply_lk = [&](Vec& slice) {
    fft.forward(slice.data(), spec);
    spec *= sym;
    fft.inverse(spec, slice.data());
  };

  DiffusionResult out;
  out.r_diff = SpaceTimeField::vector(g);
  const double inv_sigma = 1.0 / sigma;

  for (int j = 0; j < d; ++j) {
    // lambda^{-1} h_j L_k(chi^2 R_j) e_j
    const double inv_lambda = 1.0 / tmp[j].lambda;
    for (int k = 0; k < g.nt; ++k) {
      double hk = tmp[j].h(k);
      if (hk == 0.0) continue;
      sc.buf = P[j].slice(0, k);
      apply_lk(sc.buf);
      out.r_diff.slice(mik[j].axis, k) += (inv_lambda * hk) * sc.buf;
    }
    if (!cf.active[j]) continue;
    for (const FlowChart& chart : atlas.charts) {
      for (int k = chart.k_lo; k <= chart.k_hi; ++k) {
        double t = g.time(k);
        double zeta = atlas.zeta.zeta(chart.i, t);
        double gt = tmp[j].gtilde(t);
        if (zeta == 0.0 || gt == 0.0) continue;
        MapSlice phi = chart.map_slice(g, k);
        InvGradSlice ig;
        if (!chart.identity) ig = invgrad_slice(chart, g, fft, k);
        omega_column(mik[j], sigma, g, phi, ig, sc);
        Vec aslice = cf.a[j].slice(0, k);
        const double cw = inv_sigma * eta * gt * zeta;
        for (int r = 0; r < d; ++r) {
          sc.buf = aslice * sc.vcomp[r];
          apply_lk(sc.buf);
          out.r_diff.slice(r, k) += cw * sc.buf;
        }
        // anti-divergence correction of L_k(grad a . IG Omega(Phi))
        slice_gradient(fft, aslice.data(), sc.grad_ptrs(d));
        sc.sbuf.setZero();
        for (int r = 0; r < d; ++r) sc.sbuf += sc.grads[r] * sc.vcomp[r];
        apply_lk(sc.sbuf);
        slice_anti_divergence(fft, sc.sbuf.data(), sc.vout_ptrs(d));
        for (int r = 0; r < d; ++r) out.r_diff.slice(r, k) -= cw * sc.vout[r];
      }
    }
  }

  out.l1 = l1_norm(out.r_diff);
  SpaceTimeField div_rd = divergence(out.r_diff);
  SpaceTimeField lk_theta = apply_operator(theta_total, lk);
  out.lk_theta_l1 = l1_norm(lk_theta);
  div_rd -= lk_theta;
  out.div_residual_l1 = l1_norm(div_rd);
  return out;
}

double predicted_combo(const std::string& c, const StepParams& prm, int d) {
  const double sp = conjugate_exponent(prm.s);
  const double pp = conjugate_exponent(prm.p);
  auto powe = [](double base, double e) {
    return (e == 0.0) ? 1.0 : std::pow(base, e);
  };
  double inv_pp = (pp == kInf) ? 0.0 : 1.0 / pp;
  double inv_sp = (sp == kInf) ? 0.0 : 1.0 / sp;
  if (c == "R_lin")
    return 1.0 / prm.lambda + 1.0 / prm.sigma +
           powe(prm.kappa, -1.0 / prm.s) * powe(prm.mu, -(d - 1) / prm.p);
  if (c == "R_cor") return 1.0 / prm.lambda + 1.0 / prm.sigma;
  if (c == "R_trans")
    return prm.lambda * powe(prm.kappa, 1.0 / prm.s) / prm.sigma *
           powe(prm.mu, -1.0 - (d - 1) * inv_pp);
  if (c == "R_osc_x") return 1.0 / prm.sigma;
  if (c == "R_osc_t") return 1.0 / prm.lambda;
  if (c == "R_interact") return std::pow(double(prm.lambda), -0.5);
  if (c == "w_w1p")
    return powe(prm.kappa, inv_sp - 1.0 / prm.st) * prm.sigma *
           powe(prm.mu, 1.0 + (d - 1) * inv_pp - (d - 1) / prm.pt);
  if (c == "theta_c")
    return powe(prm.kappa, 1.0 / prm.s) * powe(double(prm.sigma), -prm.N) *
           powe(prm.mu, (d - 1) / prm.p - (d - 1) / 2.0);
  if (c == "theta_o") return 1.0 / prm.lambda;
  if (c == "w_c") return 1.0 / prm.sigma;
  throw std::invalid_argument("predicted_combo: unknown component " + c);
}

std::vector<NormTableRow> lemma_norm_table(const DefectBuildResult& defect,
                                           const PerturbationBundle& bundle,
                                           const StepParams& prm, int d) {
  std::vector<NormTableRow> rows;
  for (const auto& s : defect.stats) {
    NormTableRow r;
    r.name = s.name;
    r.measured = s.l1;
    if (s.name == "R_rem" || s.name == "R_flow")
      r.predicted = prm.delta / 4.0;
    else
      r.predicted = predicted_combo(s.name, prm, d);
    rows.push_back(r);
  }
  NormTableRow r;
  r.name = "theta_c_sup";
  r.measured = bundle.theta_c.abs().maxCoeff();
  r.predicted = predicted_combo("theta_c", prm, d);
  rows.push_back(r);
  return rows;
}

}  // namespace citl
