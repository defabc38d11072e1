#include <cmath>
#include <random>

#include "citl/planner.hpp"
#include "doctest.h"

using namespace citl;

TEST_CASE("rational arithmetic: parsing, conjugates, boundary exactness") {
  CHECK(Rat::parse("3/2") == Rat(3, 2));
  CHECK(Rat::parse("1.5") == Rat(3, 2));
  CHECK(Rat::parse("inf").is_inf());
  CHECK(conjugate(Rat(1)).is_inf());
  CHECK(conjugate(Rat::inf()) == Rat(1));
  CHECK(conjugate(Rat(3, 2)) == Rat(3));
  CHECK(conjugate(conjugate(Rat(7, 3))) == Rat(7, 3));
  CHECK(Rat::from_double(0.75) == Rat(3, 4));
}

TEST_CASE("standing assumption gate: s~ >= s' is a rejection, not infeasibility") {
  // s = 3/2 has s' = 3
  Assumption a = check_assumption(2, Rat(3, 2), Rat(2), Rat(3), Rat(2));
  CHECK(a.rejected);
  Assumption b = check_assumption(2, Rat(3, 2), Rat(2), Rat(2999, 1000), Rat(2));
  CHECK(!b.rejected);
}

TEST_CASE("index condition margins match hand evaluation") {
  // d=2, s=2, p=2, s~=3/2, p~=2: margin = 1/2 + 3/4 - 2 = -3/4
  Assumption a = check_assumption(2, Rat(2), Rat(2), Rat(3, 2), Rat(2));
  CHECK(!a.rejected);
  CHECK(!a.feasible);
  CHECK(a.margin == doctest::Approx(-0.75));
  // s~ = 1 is feasible for every finite choice
  Assumption b = check_assumption(2, Rat(7), Rat(9), Rat(1), Rat(11));
  CHECK(b.feasible);
  CHECK(std::isinf(b.margin));
}

TEST_CASE("s~ = 1 never rejected over a random index grid") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> num(1, 12);
  for (int i = 0; i < 100; ++i) {
    Rat s(num(rng) + 1, 1), p(num(rng), 1), pt(num(rng), 1);
    Assumption a = check_assumption(2 + (i % 2), s, p, Rat(1), pt);
    CHECK(!a.rejected);
    CHECK(a.feasible);
  }
}

TEST_CASE("boundary s~ -> s' reduces to the 1/p + 1/pt condition exactly") {
  // substituting s~ = s' makes s~'/(s pt) equal 1/pt identically
  for (long long sn : {3, 5, 7})
    for (long long sd : {2, 3}) {
      if (sn <= sd) continue;
      Rat s(sn, sd);
      Rat sp = conjugate(s);
      Rat lhs = conjugate(sp) / (s * Rat(4));  // pt = 4
      CHECK(lhs == Rat(1, 4));
    }
}

TEST_CASE("solve_exponents: windows, caps, and positive slack") {
  // unbounded alpha window capped at 2 by policy
  FeasibilityReport rep = solve_exponents(2, Rat(2), Rat(1), Rat(1), Rat(1));
  CHECK(rep.feasible);
  CHECK(std::isinf(rep.alpha_hi));
  CHECK(rep.alpha == doctest::Approx(1.0));
  CHECK(rep.beta_lo < rep.beta);
  CHECK(rep.beta < rep.beta_hi);
  CHECK(rep.beta_lo > 0);
  CHECK(window_slack(2, 2, 1, 1, 1, rep.alpha, rep.beta, rep.gamma) > 0);

  FeasibilityReport inf_rep = solve_exponents(2, Rat(2), Rat(2), Rat(3, 2), Rat(2));
  CHECK(!inf_rep.feasible);

  FeasibilityReport rej = solve_exponents(2, Rat(3, 2), Rat(2), Rat(3), Rat(2));
  CHECK(rej.rejected);
}

TEST_CASE("alpha window grows monotonically with the condition margin") {
  // decreasing p enlarges 1/p, hence the margin, and never shrinks the window
  double prev_hi = 0;
  for (long long pd : {1, 2, 3, 4}) {
    Rat p(5, pd);  // p = 5, 5/2, 5/3, 5/4 decreasing
    FeasibilityReport rep = solve_exponents(2, Rat(2), p, Rat(9, 8), Rat(1));
    if (!rep.feasible) {
      prev_hi = 0;
      continue;
    }
    CHECK(rep.alpha_hi >= prev_hi - 1e-12);
    prev_hi = rep.alpha_hi;
  }
}

TEST_CASE("diffusion planner: the two remark cases classify correctly") {
  // s~ = 1, s >> max(sbar, s'): arbitrarily large mbar, k admissible
  {
    FeasibilityReport rep = solve_exponents_diffusion(
        2, Rat(100), Rat(2), Rat(1), Rat(1), Rat(2), 40, 50);
    CHECK(!rep.rejected);
    CHECK(rep.feasible);
    CHECK(rep.alpha >= rep.alpha_min);
  }
  // minus-Laplacian case: s~ = pt = mbar = 1, sbar = 2, k = 2 feasible for
  // s in (4, inf); the boundary s = 4 violates the mbar bound
  {
    FeasibilityReport ok = solve_exponents_diffusion(2, Rat(21, 5), Rat(3),
                                                     Rat(1), Rat(1), Rat(2), 1, 2);
    CHECK(ok.feasible);
    FeasibilityReport bad =
        solve_exponents_diffusion(2, Rat(4), Rat(3), Rat(1), Rat(1), Rat(2), 1, 2);
    CHECK(bad.rejected);
  }
  // k bound violation names the condition
  {
    FeasibilityReport bad =
        solve_exponents_diffusion(2, Rat(3), Rat(2), Rat(1), Rat(1), Rat(2), 0, 5);
    CHECK(bad.rejected);
    CHECK(bad.reject_reason.find("k bound") != std::string::npos);
  }
}

TEST_CASE("diffusion planner: picked exponents satisfy all inequalities") {
  FeasibilityReport rep = solve_exponents_diffusion(
      2, Rat(6), Rat(3, 2), Rat(9, 8), Rat(1), Rat(3, 2), 1, 2);
  if (rep.feasible) {
    double s = 6, p = 1.5, st = 9.0 / 8, pt = 1, sbar = 1.5;
    double sp = s / (s - 1), pp = p / (p - 1);
    double a = rep.alpha, b = rep.beta, gmm = rep.gamma;
    CHECK((a + 1) * 1 + 1.0 / p + b / s - b / sbar < 0);
    CHECK(a + 1 + 1.0 / pp - 1.0 / pt + b / sp - b / st < 0);
    CHECK(-a - 1 - 1.0 / pp + gmm + b / s < 0);
    CHECK((a + 1) * (2 - 1) - 1.0 / pp - b / sp < 0);
  }
}

TEST_CASE("concretize: rounding, guards, reductions, capacity error") {
  FeasibilityReport rep = solve_exponents(2, Rat(2), Rat(1), Rat(1), Rat(1));
  // alpha = 1, mu = 4 gives sigma = 4 when the grid allows it
  {
    Grid g(2, 256, 2048);
    ParameterSet ps =
        concretize(rep, 2, Rat(2), Rat(1), Rat(1), Rat(1), 4.0, g);
    CHECK(ps.sigma == 4);
    CHECK(!ps.mu_reduced);
    CHECK(ps.sigma * ps.mu <= g.nx / 8.0 + 1e-9);
    CHECK(ps.lambda * ps.kappa <= g.nt / 8.0 + 1e-9);
    CHECK(window_slack(2, 2, 1, 1, 1, ps.alpha, ps.beta, ps.gamma) > 0);
  }
  // tight grid forces a reduction or a capacity error
  {
    Grid g(2, 16, 16);
    CHECK_THROWS(concretize(rep, 2, Rat(2), Rat(1), Rat(1), Rat(1), 8.0, g));
  }
  {
    Grid g(2, 64, 256);
    ParameterSet ps =
        concretize(rep, 2, Rat(2), Rat(1), Rat(1), Rat(1), 16.0, g);
    CHECK(ps.mu_reduced);
    CHECK(ps.mu < 16.0);
    CHECK(ps.sigma * ps.mu <= g.nx / 8.0 + 1e-9);
  }
}
