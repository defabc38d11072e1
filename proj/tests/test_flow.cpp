#include <cmath>

#include "citl/flow.hpp"
#include "citl/norms.hpp"
#include "doctest.h"

using namespace citl;

namespace {

SpaceTimeField shear_velocity(const Grid& g, double amp) {
  SpaceTimeField u = SpaceTimeField::vector(g);
  u.fill_spatial(0, [amp](const std::array<double, 3>& x) {
    return amp * std::sin(kTwoPi * x[1]);
  });
  return u;
}

}  // namespace

TEST_CASE("zeta partition sums to one and has the prescribed overlap decay") {
  for (int lambda : {4, 16, 64}) {
    ZetaPartition z(0.25, 4, lambda);
    double worst = 0;
    for (int i = 0; i <= 2000; ++i) {
      double t = double(i) / 2000;
      double acc = 0;
      for (int j = 0; j < 4; ++j) acc += z.zeta(j, t);
      worst = std::max(worst, std::abs(acc - 1.0));
      for (int j = 0; j < 4; ++j)
        if (t < z.support_lo(j) || t > z.support_hi(j))
          CHECK(z.zeta(j, t) == 0.0);
    }
    CHECK(worst <= 1e-10);
    // meas supp(zeta_i zeta_{i+1}) = lambda^{-1/2} nu exactly by construction
    double overlap = 2 * z.w;
    CHECK(overlap * std::sqrt(double(lambda)) ==
          doctest::Approx(0.25).epsilon(1e-12));
    // |dzeta| <= C lambda^{1/2} with C recorded via the construction
    double dmax = 0;
    for (int i = 0; i <= 4000; ++i) {
      double t = double(i) / 4000;
      for (int j = 0; j < 4; ++j) dmax = std::max(dmax, std::abs(z.dzeta(j, t)));
    }
    CHECK(dmax <= 3.0 * std::sqrt(double(lambda)) / 0.25);
  }
}

TEST_CASE("charts for u = 0 are exact identities") {
  Grid g(2, 32, 64);
  SpaceTimeField u = SpaceTimeField::vector(g);
  ChartAtlas atlas = build_atlas(u, 0.25, 4);
  for (const auto& c : atlas.charts) {
    CHECK(c.identity);
    CHECK(c.max_det_err == 0.0);
  }
}

TEST_CASE("charts for constant u solve the characteristics by hand") {
  Grid g(2, 32, 64);
  SpaceTimeField u = SpaceTimeField::vector(g);
  u.fill(0, [](double, const std::array<double, 3>&) { return 0.3; });
  u.fill(1, [](double, const std::array<double, 3>&) { return -0.1; });
  ChartAtlas atlas = build_atlas(u, 0.25, 4);
  const FlowChart& c = atlas.charts[1];
  double cvec[2] = {0.3, -0.1};
  double worst = 0;
  for (int k = c.k_lo; k <= c.k_hi; ++k) {
    double dt_anchor = c.ti - g.time(k);
    for (int a = 0; a < 2; ++a) {
      // Phi(t, x) = x + c (t_i - t): displacement is spatially constant
      Vec disp = ConstVecMap(c.map_slice(g, k).disp[a], g.spatial_points());
      worst = std::max(worst, (disp - cvec[a] * dt_anchor).abs().maxCoeff());
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("shear charts: measure preservation and O(nu) inverse-gradient") {
  std::vector<double> nus = {0.25, 0.125, 0.0625}, devs;
  for (double nu : nus) {
    Grid g(2, 64, 128);
    SpaceTimeField u = shear_velocity(g, 0.5);
    ChartAtlas atlas = build_atlas(u, nu, 4);
    CHECK(atlas.max_det_err() <= 1e-6);
    devs.push_back(atlas.max_invgrad_dev());
  }
  auto fit = fit_loglog(nus, devs);
  CHECK(fit.slope >= 0.9);
}

TEST_CASE("RK4 round trip returns the starting point") {
  Grid g(2, 64, 64);
  SpaceTimeField u = shear_velocity(g, 0.7);
  SpaceTimeInterpolant ui(u);
  double h = 1.0 / 128;
  double worst = 0;
  for (int i = 0; i < 8; ++i) {
    std::array<double, 3> x{0.1 + 0.1 * i, 0.3 + 0.07 * i, 0};
    auto y = trace_point(ui, 0.2, 0.45, x, h);
    auto back = trace_point(ui, 0.45, 0.2, y, h);
    worst = std::max(worst, std::max(std::abs(back[0] - x[0]),
                                     std::abs(back[1] - x[1])));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("build_atlas validates its preconditions") {
  Grid g(2, 32, 64);
  SpaceTimeField bad = SpaceTimeField::vector(g);
  bad.fill_spatial(0, [](const std::array<double, 3>& x) {
    return std::sin(kTwoPi * x[0]);  // div != 0
  });
  CHECK_THROWS(build_atlas(bad, 0.25, 4));
  SpaceTimeField ok = SpaceTimeField::vector(g);
  CHECK_THROWS(build_atlas(ok, 0.3, 4));  // 1/nu not an integer
}

TEST_CASE("inverse-map divergence identity on the shear chart") {
  Grid g(2, 128, 64);
  SpaceTimeField u = shear_velocity(g, 0.5);
  ChartAtlas atlas = build_atlas(u, 0.25, 4);
  const FlowChart& chart = atlas.charts[1];

  // identity map: both sides coincide exactly
  {
    ChartAtlas id_atlas = build_atlas(SpaceTimeField::vector(g), 1.0, 4);
    SpaceTimeField G = SpaceTimeField::vector(g);
    G.fill_spatial(0, [](const std::array<double, 3>& x) {
      return std::cos(kTwoPi * x[1]) + 0.5 * std::sin(kTwoPi * x[0]);
    });
    G.fill_spatial(1, [](const std::array<double, 3>& x) {
      return std::sin(kTwoPi * x[0]) + 0.4 * std::cos(kTwoPi * x[1]);
    });
    CHECK(inverse_map_divergence_check(id_atlas.charts[0], g, G) <= 1e-10);
  }

  // constant G: both sides vanish
  {
    SpaceTimeField G = SpaceTimeField::vector(g);
    G.fill(0, [](double, const std::array<double, 3>&) { return 0.7; });
    G.fill(1, [](double, const std::array<double, 3>&) { return -0.2; });
    CHECK(inverse_map_divergence_check(chart, g, G) <= 1e-8);
  }

  // smooth G with nonzero divergence: residual <= 1e-4 relative
  {
    SpaceTimeField G = SpaceTimeField::vector(g);
    G.fill_spatial(0, [](const std::array<double, 3>& x) {
      return std::cos(kTwoPi * x[1]) + 0.5 * std::sin(kTwoPi * x[0]);
    });
    G.fill_spatial(1, [](const std::array<double, 3>& x) {
      return std::sin(kTwoPi * x[0]) + 0.4 * std::cos(kTwoPi * x[1]);
    });
    SpaceTimeField divG = divergence(G);
    double res = inverse_map_divergence_check(chart, g, G);
    CHECK(res <= 1e-4 * sup_norm(divG));
  }

  // the paper's divergence-free example: both sides stay at the floor
  {
    SpaceTimeField G = SpaceTimeField::vector(g);
    G.fill_spatial(0, [](const std::array<double, 3>& x) {
      return std::cos(kTwoPi * x[1]);
    });
    G.fill_spatial(1, [](const std::array<double, 3>& x) {
      return std::sin(kTwoPi * x[0]);
    });
    CHECK(inverse_map_divergence_check(chart, g, G) <= 1e-4 * kTwoPi);
  }
}

TEST_CASE("improved anti-divergence: defining identity and sigma decay") {
  Grid g(2, 256, 32);
  SpaceTimeField u = shear_velocity(g, 0.4);
  ChartAtlas atlas = build_atlas(u, 0.25, 4);
  const FlowChart& chart = atlas.charts[0];
  int k = (chart.k_lo + chart.k_hi) / 2;
  MapSlice phi = chart.map_slice(g, k);
  SliceFFT fft(g);

  // fine-cell zero-mean g
  int nf = 64;
  Vec gsamp(long(nf) * nf);
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j)
      gsamp(long(i) * nf + j) = std::cos(kTwoPi * double(i) / nf);
  SpatialInterpolant gi(2, nf, gsamp);

  const long nsp = g.spatial_points();
  Vec f(nsp);
  for (long i = 0; i < nsp; ++i) {
    auto ix = g.unflat(i);
    f(i) = 1.0 + 0.5 * std::sin(kTwoPi * ix[0] / g.nx) *
                     std::cos(kTwoPi * ix[1] / g.nx);
  }

  // f == 0 gives 0
  {
    Vec zero = Vec::Zero(nsp), o0(nsp), o1(nsp);
    improved_anti_div_slice(fft, zero, gi, 4, phi, {o0.data(), o1.data()});
    CHECK(o0.abs().maxCoeff() == 0.0);
  }

  // div v = f g(sigma Phi) - mean
  {
    Vec o0(nsp), o1(nsp), comp(nsp), der(nsp);
    improved_anti_div_slice(fft, f, gi, 4, phi, {o0.data(), o1.data()});
    compose_slice(gi, 4.0, g, phi, comp.data());
    comp *= f;
    comp -= comp.mean();
    Vec div = Vec::Zero(nsp);
    slice_derivative(fft, o0.data(), der.data(), 0, 1);
    div += der;
    slice_derivative(fft, o1.data(), der.data(), 1, 1);
    div += der;
    CHECK((div - comp).abs().maxCoeff() <= 1e-6 * comp.abs().maxCoeff());
  }

  // ||v||_2 decays like sigma^{-1}
  {
    std::vector<double> sigmas, norms;
    for (int sigma : {2, 4, 8, 16}) {
      Vec o0(nsp), o1(nsp);
      improved_anti_div_slice(fft, f, gi, sigma, phi, {o0.data(), o1.data()});
      sigmas.push_back(double(sigma));
      norms.push_back(std::sqrt((o0.square() + o1.square()).mean()));
    }
    auto fit = fit_loglog(sigmas, norms);
    CHECK(fit.slope <= -0.9);
  }
}
