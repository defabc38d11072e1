#include <cmath>

#include "citl/fit.hpp"
#include "citl/norms.hpp"
#include "citl/rng.hpp"
#include "citl/spectral_ops.hpp"
#include "doctest.h"

using namespace citl;

TEST_CASE("spatial spectral derivative is exact on single modes") {
  Grid g(2, 32, 8);
  SpaceTimeField f = SpaceTimeField::scalar(g);
  f.fill(0, [](double, const std::array<double, 3>& x) {
    return std::sin(kTwoPi * x[0]);
  });
  SpaceTimeField df = derivative(f, 0, 1);
  SpaceTimeField expect = SpaceTimeField::scalar(g);
  expect.fill(0, [](double, const std::array<double, 3>& x) {
    return kTwoPi * std::cos(kTwoPi * x[0]);
  });
  expect -= df;
  CHECK(expect.max_abs() < 1e-10);
}

TEST_CASE("time derivative of a time-constant field vanishes") {
  Grid g(2, 16, 16);
  SpaceTimeField f = SpaceTimeField::scalar(g);
  f.fill_spatial(0, [](const std::array<double, 3>& x) {
    return std::cos(kTwoPi * (x[0] + 2 * x[1]));
  });
  CHECK(derivative(f, kTimeAxis, 1).max_abs() < 1e-11);
}

TEST_CASE("time derivative converges at 4th order on refining grids") {
  // d_t sin(2 pi t) at t = 1/2 equals -2 pi
  std::vector<double> ns = {33, 65, 129}, errs;
  for (double nd : ns) {
    int nt = int(nd);
    Grid g(2, 8, nt);
    SpaceTimeField f = SpaceTimeField::scalar(g);
    f.fill(0, [](double t, const std::array<double, 3>&) {
      return std::sin(kTwoPi * t);
    });
    SpaceTimeField df = derivative(f, kTimeAxis, 1);
    int kmid = (nt - 1) / 2;
    errs.push_back(std::abs(df.at(0, kmid, 0) - (-kTwoPi)));
  }
  CHECK(errs[0] < 5e-4);
  auto fit = fit_loglog(ns, errs);
  CHECK(fit.slope <= -3.5);
}

TEST_CASE("derivative rejects unsupported order") {
  Grid g(2, 16, 16);
  SpaceTimeField f = SpaceTimeField::scalar(g);
  CHECK_THROWS(derivative(f, 0, 5));
}

TEST_CASE("anti-divergence of zero is zero, single mode solved by hand") {
  Grid g(2, 32, 8);
  SpaceTimeField z = SpaceTimeField::scalar(g);
  CHECK(anti_divergence(z).max_abs() == 0.0);

  SpaceTimeField f = SpaceTimeField::scalar(g);
  f.fill(0, [](double, const std::array<double, 3>& x) {
    return std::sin(kTwoPi * x[0]);
  });
  SpaceTimeField v = anti_divergence(f);
  // lap^{-1} f = -f/(4 pi^2); gradient gives (-cos(2 pi x1)/(2 pi), 0)
  SpaceTimeField e0 = SpaceTimeField::scalar(g);
  e0.fill(0, [](double, const std::array<double, 3>& x) {
    return -std::cos(kTwoPi * x[0]) / kTwoPi;
  });
  double err = 0;
  for (int k = 0; k < g.nt; ++k)
    err = std::max(err, (v.slice(0, k) - e0.slice(0, k)).abs().maxCoeff());
  CHECK(err < 1e-12);
  CHECK(v.comp(1).abs().maxCoeff() < 1e-12);
}

TEST_CASE("div(antidiv(f)) reconstructs f - mean on random band-limited fields") {
  // quantified over 100 random trigonometric polynomials
  std::mt19937_64 rng(7);
  Grid g(2, 32, 8);
  double worst_recon = 0, worst_mean = 0;
  for (int trial = 0; trial < 100; ++trial) {
    SpaceTimeField f = random_band_limited_field(g, 4, rng, 6);
    SpaceTimeField v = anti_divergence(f);
    SpaceTimeField dv = divergence(v);
    for (int k = 0; k < g.nt; ++k) {
      double mean = f.slice(0, k).mean();
      worst_recon = std::max(
          worst_recon, (dv.slice(0, k) - f.slice(0, k) + mean).abs().maxCoeff());
      for (int c = 0; c < g.d; ++c)
        worst_mean = std::max(worst_mean, std::abs(v.slice(c, k).mean()));
    }
  }
  CHECK(worst_recon <= 1e-8);
  CHECK(worst_mean <= 1e-12);
}

TEST_CASE("mixed norms reproduce hand-computed values") {
  Grid g(2, 32, 257);
  SpaceTimeField one = SpaceTimeField::scalar(g);
  one.fill(0, [](double, const std::array<double, 3>&) { return 1.0; });
  CHECK(lpq_norm(one, 3, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lpq_norm(one, kInf, kInf) == doctest::Approx(1.0).epsilon(1e-12));

  SpaceTimeField sx = SpaceTimeField::scalar(g);
  sx.fill(0, [](double, const std::array<double, 3>& x) {
    return std::sin(kTwoPi * x[0]);
  });
  CHECK(lpq_norm(sx, 2, 2) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));

  SpaceTimeField st = SpaceTimeField::scalar(g);
  st.fill(0, [](double t, const std::array<double, 3>&) {
    return std::sin(kTwoPi * t);
  });
  CHECK(lpq_norm(st, 1, kInf) == doctest::Approx(2.0 / kPi).epsilon(3e-4));
}

TEST_CASE("mixed norm is absolutely homogeneous and monotone") {
  std::mt19937_64 rng(11);
  Grid g(2, 16, 17);
  SpaceTimeField f = random_band_limited_field(g, 3, rng);
  for (double s : {1.0, 2.0, kInf})
    for (double p : {1.0, 3.0, kInf}) {
      SpaceTimeField h = f;
      h *= -3.7;
      double a = lpq_norm(h, s, p), b = 3.7 * lpq_norm(f, s, p);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, b));
    }
  // pointwise domination
  SpaceTimeField dom = f;
  for (int k = 0; k < g.nt; ++k)
    dom.slice(0, k) = f.slice(0, k).abs() + 0.2;
  for (double s : {1.0, 2.5})
    for (double p : {1.0, 4.0}) CHECK(lpq_norm(f, s, p) <= lpq_norm(dom, s, p));
}

TEST_CASE("W^{1,p} and C^k norms include derivative terms") {
  Grid g(2, 32, 9);
  SpaceTimeField f = SpaceTimeField::scalar(g);
  f.fill(0, [](double, const std::array<double, 3>& x) {
    return std::sin(kTwoPi * x[0]);
  });
  // ||f||_1 = 2/pi, ||grad f||_1 = 2 pi * 2/pi = 4
  double w11 = w1p_mixed_norm(f, 1, 1);
  CHECK(w11 == doctest::Approx(2.0 / kPi + 4.0).epsilon(5e-3));
  double c1 = ck_norm_spatial(f, 1);
  CHECK(c1 == doctest::Approx(kTwoPi).epsilon(1e-10));
}

TEST_CASE("constant-coefficient operator application is spectral") {
  Grid g(2, 32, 8);
  SpaceTimeField f = SpaceTimeField::scalar(g);
  f.fill(0, [](double, const std::array<double, 3>& x) {
    return std::sin(kTwoPi * (x[0] + x[1]));
  });
  auto lk = ConstCoeffOperator::minus_laplacian(2);
  SpaceTimeField lf = apply_operator(f, lk);
  SpaceTimeField expect = f;
  expect *= 2.0 * kTwoPi * kTwoPi;
  expect -= lf;
  CHECK(expect.max_abs() < 1e-9);
  ConstCoeffOperator bad;
  bad.terms.push_back({{0, 0, 0}, 1.0});
  CHECK_THROWS(apply_operator(f, bad));
}

TEST_CASE("binary dump round-trips bit-exactly") {
  std::mt19937_64 rng(3);
  Grid g(2, 16, 9);
  SpaceTimeField f = random_band_limited_field(g, 2, rng);
  dump_field(f, "/tmp/citl_test_dump.citl");
  SpaceTimeField h = load_field("/tmp/citl_test_dump.citl");
  h -= f;
  CHECK(h.max_abs() == 0.0);
}

TEST_CASE("Nyquist guards reject over-resolved constructions") {
  Grid g(2, 32, 32);
  CHECK_THROWS(check_spatial_guard(g, 5.0, "test"));
  CHECK_NOTHROW(check_spatial_guard(g, 4.0, "test"));
  CHECK_THROWS(check_temporal_guard(g, 5.0, "test"));
}
