// scratch probe for the continuity-defect residual (not part of the suite)
#include <iostream>

#include "citl/harness.hpp"
#include "citl/norms.hpp"

using namespace citl;

int main(int argc, char** argv) {
  double u_amp = argc > 1 ? std::stod(argv[1]) : 0.0;
  int only_j = argc > 2 ? std::stoi(argv[2]) : -1;
  Grid g(2, 64, 65);
  Triple T = manufactured_triple(g, 1.0, u_amp, 99);
  if (only_j == 0) T.R.comp(1).setZero();
  if (only_j == 1) T.R.comp(0).setZero();

  StepParams prm;
  prm.s = 1.25;
  prm.p = 2;
  prm.mu = 2;
  prm.sigma = 1;
  prm.kappa = 1.5;
  prm.lambda = 2;
  prm.eta = 1.0;
  prm.delta = 9.0 * sup_norm(T.R);
  prm.r = choose_margin(T.R, prm.delta);

  CutoffSet cut = build_cutoffs(T.R, prm.delta, prm.r);
  CoefficientFields cf = build_coefficients(cut, T.R, prm.s, prm.p);
  auto P = cutoff_products(cut, T.R);
  std::vector<MikadoTriple> mik;
  std::vector<TemporalTriple> tmp;
  for (int j = 1; j <= 2; ++j) {
    mik.push_back(build_mikado(j, prm.mu, prm.sigma, prm.p, 2, g));
    tmp.push_back(build_temporal(j, prm.kappa, prm.lambda, prm.s, g.nt, 2));
  }
  ChartAtlas atlas = build_atlas(T.u, u_amp == 0.0 ? 1.0 : 0.25, prm.lambda);
  PerturbationBundle bundle = build_perturbation(atlas, cf, P, mik, tmp, prm.eta);

  // residual with each subset of perturbation parts, defect rebuilt each time
  // theta-only / w-only switches
  DefectAssembler asmr(T.rho, T.u, T.R, atlas, cf, P, bundle, mik, tmp, prm.eta,
                       prm.sigma);
  std::cout << "per-component L1:\n";
  SpaceTimeField total = SpaceTimeField::vector(g);
  for (const auto& name : DefectAssembler::component_names()) {
    if (name == "R_trans") {
      // need consolidation order: lin/cor before
    }
    SpaceTimeField c = asmr.component(name);
    std::cout << "  " << name << " " << l1_norm(c) << "\n";
    total += c;
  }
  bundle.consolidate();

  SpaceTimeField rho1 = T.rho;
  rho1.comp(0) += bundle.theta().comp(0);
  SpaceTimeField u1 = T.u;
  for (int r = 0; r < 2; ++r) u1.comp(r) += bundle.w().comp(r);
  total += T.R;

  CdeReport full = verify_cde(rho1, u1, total, prm.lambda * prm.kappa);
  std::cout << "full residual L1 = " << full.residual_l1
            << " divR = " << full.div_r_l1 << " floor = " << full.floor_l1
            << "\n";

  // theta-only: rho1 = rho + theta, u1 = u, defect should cover
  // d_t theta + div(theta u) + div(rho u) - div(R...) -- use the pieces:
  // residual of (rho + theta, u, R + R_trans + R_osc-family) tests the
  // transport + oscillation sides without the w-products
  {
    SpaceTimeField sub = SpaceTimeField::vector(g);
    for (const auto& name : {"R_trans", "R_osc_t", "R_rem", "R_flow"}) {
      SpaceTimeField c = asmr.component(name);
      sub += c;
    }
    // osc_x etc need w; theta-only identity:
    // d_t(theta_p+theta_c) + div((theta_p+theta_c) u) = div R_trans
    // d_t theta_o + div(theta_o u) = div(R_osc_t + [g g - 1] P e_j ... )
    // here just report the trans piece:
    SpaceTimeField rth = T.rho;
    rth.comp(0) += bundle.theta().comp(0);
    CdeReport r2 = verify_cde(rth, T.u, sub, prm.lambda * prm.kappa);
    std::cout << "theta-side residual (trans+osc_t+rem+flow vs theta) = "
              << r2.residual_l1 << "\n";
  }
  return 0;
}
