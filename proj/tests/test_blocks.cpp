#include <cmath>

#include "citl/blocks.hpp"
#include "citl/norms.hpp"
#include "citl/spectral_ops.hpp"
#include "doctest.h"

using namespace citl;

TEST_CASE("Mikado triple: normalization, zero means, potential identity") {
  Grid guard(2, 512, 8);
  for (double mu : {1.0, 4.0, 16.0})
    for (int sigma : {1, 2}) {
      MikadoTriple t = build_mikado(1, mu, sigma, 4.0, 2, guard);
      CHECK(std::abs(t.int_theta_w - 1.0) <= 1e-6);
      CHECK(t.mean_theta <= 1e-6);
      CHECK(t.mean_w <= 1e-6);
      CHECK(t.div_omega_err <= 1e-6);
    }
}

TEST_CASE("Mikado blocks are constant along their axis: div(Theta W e_j) = 0") {
  Grid g(2, 64, 8);
  MikadoTriple t = build_mikado(2, 4.0, 1, 2.0, 2, g);
  // Theta W depends only on x1 for j = 2; d/dx2 of the composed product = 0
  Vec slice(g.spatial_points());
  MapSlice id;
  compose_slice(MikadoTriple::TwFn{&t}, 1.0, g, id, slice.data());
  SliceFFT fft(g);
  Vec der(g.spatial_points());
  slice_derivative(fft, slice.data(), der.data(), t.axis, 1);
  CHECK(der.abs().maxCoeff() <= 1e-12 * std::max(1.0, slice.abs().maxCoeff()));
}

TEST_CASE("Mikado triples for distinct directions have shrinking overlap") {
  Grid g(2, 128, 8);
  double frac_prev = 1.0;
  for (double mu : {8.0, 16.0}) {
    MikadoTriple t1 = build_mikado(1, mu, 1, 2.0, 2, g);
    MikadoTriple t2 = build_mikado(2, mu, 1, 2.0, 2, g);
    Vec a(g.spatial_points()), b(g.spatial_points());
    MapSlice id;
    compose_slice(MikadoTriple::ThetaFn{&t1}, 1.0, g, id, a.data());
    compose_slice(MikadoTriple::WFn{&t2}, 1.0, g, id, b.data());
    double thresh = 1e-3 * a.abs().maxCoeff() * b.abs().maxCoeff();
    double frac = double(((a * b).abs() > thresh).count()) / a.size();
    CHECK(frac < frac_prev);
    CHECK(frac <= 2.0 * (0.44 * 0.44) / (mu * mu) + 1e-9);
    frac_prev = frac;
  }
}

TEST_CASE("Mikado scaling exponents match the predictions within 0.1") {
  auto rows = mikado_scaling_report(2, 4.0, {4, 8, 16, 32}, 1, {1, 2, 4, 8}, 4.0,
                                    {1.0, 2.0, 4.0}, {0, 1});
  REQUIRE(!rows.empty());
  for (const auto& r : rows) {
    INFO(r.field, " sweep=", r.sweep, " m=", r.m, " r=", r.r, " predicted=",
         r.predicted, " fitted=", r.fitted);
    CHECK(std::abs(r.fitted - r.predicted) <= 0.1);
  }
  // spot checks from the norm bookkeeping: Theta mu-slope at r = p is 0;
  // Omega mu-slope at m=0, r=1, d=2, p=4 is -7/4
  for (const auto& r : rows) {
    if (r.field == "Theta" && r.sweep == "mu" && r.m == 0 && r.r == 4.0)
      CHECK(std::abs(r.fitted - 0.0) <= 0.1);
    if (r.field == "Omega" && r.sweep == "mu" && r.m == 0 && r.r == 1.0)
      CHECK(std::abs(r.fitted - (-1.75)) <= 0.1);
    if (r.field == "W" && r.sweep == "sigma" && r.m == 1)
      CHECK(std::abs(r.fitted - 1.0) <= 0.1);
  }
}

TEST_CASE("under-resolved sweeps are refused") {
  CHECK_THROWS(mikado_scaling_report(2, 2.0, {4, 8}, 1, {1, 2}, 4.0, {1.0}, {0}));
  CHECK_THROWS(temporal_scaling_report(2.0, {4, 8, 16}, 2, {1.0}, {0}));
}

TEST_CASE("temporal triple: product normalization and correction bound") {
  for (double kappa : {1.0, 4.0, 16.0})
    for (int lambda : {2, 8}) {
      int nt = std::max(64, int(8 * lambda * kappa) + 8);
      TemporalTriple t = build_temporal(1, kappa, lambda, 1.5, nt, 2);
      CHECK(std::abs(t.int_gbar_gtilde - 1.0) <= 1e-8);
      CHECK(t.h_sup <= 1.0 + 1e-9);
      // individual zero mean (enforced reading of the notation)
      double m = quad_gl5([&t](double x) { return t.gbar(x); }, 0, 1,
                          lambda * std::max(128, int(96 * kappa)));
      CHECK(std::abs(m) <= 1e-8);
    }
}

TEST_CASE("temporal profiles of different directions occupy disjoint slots") {
  int d = 2, nt = 512;
  TemporalTriple t1 = build_temporal(1, 4.0, 4, 2.0, nt, d);
  TemporalTriple t2 = build_temporal(2, 4.0, 4, 2.0, nt, d);
  double overlap = 0;
  for (int i = 0; i <= 4096; ++i) {
    double t = double(i) / 4096;
    overlap = std::max(overlap, std::abs(t1.gbar(t) * t2.gtilde(t)));
  }
  CHECK(overlap == 0.0);
}

TEST_CASE("temporal scaling exponents match within 0.05") {
  auto rows = temporal_scaling_report(1.5, {4, 8, 16, 32}, 4, {1.0, 2.0}, {0, 1});
  for (const auto& r : rows) {
    INFO(r.field, " m=", r.m, " r=", r.r, " predicted=", r.predicted,
         " fitted=", r.fitted);
    CHECK(std::abs(r.fitted - r.predicted) <= 0.05);
  }
}

TEST_CASE("Nyquist guards: blocks refuse oversized parameters") {
  Grid g(2, 64, 64);
  CHECK_THROWS(build_mikado(1, 16.0, 1, 2.0, 2, g));  // 16 > 64/8
  CHECK_THROWS(build_temporal(1, 8.0, 2, 2.0, 64, 2));
}
