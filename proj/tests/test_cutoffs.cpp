#include <cmath>

#include "citl/cutoffs.hpp"
#include "citl/norms.hpp"
#include "citl/profiles.hpp"
#include "doctest.h"

using namespace citl;

namespace {

// interior-supported defect with controlled amplitude: R_j = A q(t) shape_j(x)
SpaceTimeField test_defect(const Grid& g, double amp) {
  SpaceTimeField R = SpaceTimeField::vector(g);
  for (int k = 0; k < g.nt; ++k) {
    double t = g.time(k);
    double q = Smoothstep::value((t - 0.125) / 0.125) *
               (1.0 - Smoothstep::value((t - 0.75) / 0.125));
    auto s0 = R.slice(0, k);
    auto s1 = R.slice(1, k);
    const long nsp = g.spatial_points();
    for (long i = 0; i < nsp; ++i) {
      auto ix = g.unflat(i);
      double x = double(ix[0]) / g.nx, y = double(ix[1]) / g.nx;
      s0(i) = amp * q * std::cos(kTwoPi * x);
      s1(i) = amp * q * (0.6 * std::sin(kTwoPi * y) + 0.2);
    }
  }
  return R;
}

}  // namespace

TEST_CASE("choose_margin follows the headroom formula") {
  Grid g(2, 32, 64);
  SpaceTimeField R = SpaceTimeField::vector(g);
  CHECK(choose_margin(R, 1.0) == doctest::Approx(0.125));  // R == 0

  R.fill(0, [](double, const std::array<double, 3>&) { return 1.0; });
  double delta = 16.0 * g.d * 1.0;  // ||R||_inf = delta/(16 d)
  CHECK(choose_margin(R, delta) == doctest::Approx(0.125));
  double delta2 = 16.0 * g.d / 64.0;
  CHECK(choose_margin(R, delta2) == doctest::Approx(1.0 / 128));
}

TEST_CASE("cutoffs satisfy the plateau conditions exactly on the grid") {
  Grid g(2, 64, 129);
  SpaceTimeField R = test_defect(g, 1.0);
  double delta = 9.0 * sup_norm(R);
  double r = choose_margin(R, delta);
  CutoffSet cut = build_cutoffs(R, delta, r);
  const long nsp = g.spatial_points();
  for (int j = 0; j < 2; ++j) {
    REQUIRE(cut.active[j]);
    for (int k = 0; k < g.nt; ++k) {
      double t = g.time(k);
      auto chi = cut.chi[j].slice(0, k);
      auto rj = R.slice(j, k);
      for (long i = 0; i < nsp; i += 7) {
        CHECK(chi(i) >= 0.0);
        CHECK(chi(i) <= 1.0);
        if (std::abs(rj(i)) <= cut.v0) CHECK(chi(i) == 0.0);
        if (t < r / 2 || t > 1 - r / 2) CHECK(chi(i) == 0.0);
        if (std::abs(rj(i)) >= cut.v1 && t >= r && t <= 1 - r)
          CHECK(chi(i) == 1.0);
      }
    }
  }
}

TEST_CASE("remainder budget: sum (1 - chi^2) R_j stays under delta/4") {
  Grid g(2, 64, 129);
  SpaceTimeField R = test_defect(g, 1.0);
  double delta = 9.0 * sup_norm(R);
  double r = choose_margin(R, delta);
  CutoffSet cut = build_cutoffs(R, delta, r);
  SpaceTimeField rem = SpaceTimeField::vector(g);
  for (int j = 0; j < 2; ++j)
    rem.comp(j) = R.comp(j) * (1.0 - cut.chi[j].comp(0).square());
  CHECK(l1_norm(rem) <= delta / 4.0);
}

TEST_CASE("unresolvable bands raise the resolution error") {
  Grid g(2, 32, 64);
  SpaceTimeField R = test_defect(g, 1.0);
  // delta so small the transition band is thinner than the grid can hold
  CHECK_THROWS_AS(build_cutoffs(R, 1e-3 * sup_norm(R), 0.01),
                  std::runtime_error);
}

TEST_CASE("inactive directions are skipped rather than rejected") {
  Grid g(2, 64, 65);
  SpaceTimeField R = test_defect(g, 1.0);
  R.comp(1).setZero();
  double delta = 9.0 * sup_norm(R);
  CutoffSet cut = build_cutoffs(R, delta, choose_margin(R, delta));
  CHECK(cut.active[0]);
  CHECK(!cut.active[1]);
  CoefficientFields cf = build_coefficients(cut, R, 2.0, 2.0);
  CHECK(!cf.active[1]);
  CHECK(cf.a[1].max_abs() == 0.0);
}

TEST_CASE("coefficient fields: product identity, bounds, support") {
  Grid g(2, 64, 129);
  SpaceTimeField R = test_defect(g, 0.8);
  double delta = 9.0 * sup_norm(R);
  double r = choose_margin(R, delta);
  CutoffSet cut = build_cutoffs(R, delta, r);

  for (double s : {1.25, 2.0, 3.0}) {
    double p = 2.0;
    CoefficientFields cf = build_coefficients(cut, R, s, p);
    double worst = 0;
    for (int j = 0; j < 2; ++j) {
      Vec prod = cf.a[j].comp(0) * cf.b[j].comp(0) +
                 cut.chi[j].comp(0).square() * R.comp(j);
      worst = std::max(worst, prod.abs().maxCoeff());
    }
    CHECK(worst <= 1e-8);
    CHECK(coefficient_bound_violation(cf, cut) <= 1e-6);
    // temporal support inside I_{r/2}
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < g.nt; ++k) {
        double t = g.time(k);
        if (t < r / 2 || t > 1 - r / 2)
          CHECK(cf.a[j].slice(0, k).abs().maxCoeff() == 0.0);
      }
    // smoothness witnessed by finite C^1 norms
    CHECK(std::isfinite(ck_norm_spacetime(cf.a[0], 1)));
  }
}

TEST_CASE("s = p kills the time-weight ratio exactly") {
  Grid g(2, 64, 97);
  SpaceTimeField R = test_defect(g, 0.5);
  double delta = 9.0 * sup_norm(R);
  CutoffSet cut = build_cutoffs(R, delta, choose_margin(R, delta));
  CoefficientFields cf = build_coefficients(cut, R, 2.0, 2.0);
  double worst = 0;
  for (int j = 0; j < 2; ++j) {
    const long nsp = g.spatial_points();
    for (int k = 0; k < g.nt; ++k) {
      auto a = cf.a[j].slice(0, k);
      auto chi = cut.chi[j].slice(0, k);
      auto rj = R.slice(j, k);
      for (long i = 0; i < nsp; i += 11) {
        double sgn = rj(i) > 0 ? -1.0 : (rj(i) < 0 ? 1.0 : 0.0);
        double expect = sgn * chi(i) * std::sqrt(std::abs(rj(i)));
        worst = std::max(worst, std::abs(a(i) - expect));
      }
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("plateau value of a_j is constant where the time weight is flat") {
  Grid g(2, 48, 129);
  // R constant in time over a plateau: a_j = ratio^{1/s-1/p} |R|^{1/p} there
  SpaceTimeField R = test_defect(g, 1.0);
  double delta = 9.0 * sup_norm(R);
  double r = choose_margin(R, delta);
  CutoffSet cut = build_cutoffs(R, delta, r);
  CoefficientFields cf = build_coefficients(cut, R, 1.5, 2.0);
  // mid-plateau time samples share the same weight ratio
  int k1 = g.nt / 2, k2 = g.nt / 2 + 2;
  double w1 = cf.time_weight[0](k1), w2 = cf.time_weight[0](k2);
  CHECK(w1 == doctest::Approx(w2).epsilon(1e-9));
  double a1 = cf.a[0].slice(0, k1).abs().maxCoeff();
  double a2 = cf.a[0].slice(0, k2).abs().maxCoeff();
  CHECK(a1 == doctest::Approx(a2).epsilon(1e-9));
  double ratio = std::max(w1 / cf.total_weight[0], 1e-12);
  double expect = std::pow(ratio, 1.0 / 1.5 - 0.5) *
                  std::pow(R.slice(0, k1).abs().maxCoeff(), 0.5);
  CHECK(a1 == doctest::Approx(expect).epsilon(1e-9));
}
