#pragma once

#include <optional>
#include <string>
#include <vector>

#include "citl/grid.hpp"

namespace citl {

/// Exact rational with +infinity, for boundary-exact exponent checks.
/// Falls back to double (1e-12 slack) only when a value was born irrational.
struct Rat {
  long long n = 0, d = 1;  // d == 0 encodes +infinity (n > 0)

  Rat() = default;
  Rat(long long num, long long den);
  Rat(long long v) : n(v), d(1) {}

  static Rat inf() {
    Rat r;
    r.n = 1;
    r.d = 0;
    return r;
  }
  static Rat parse(const std::string& text);  // "3/2", "1.5", "inf"
  static Rat from_double(double v);           // small-denominator snap

  bool is_inf() const { return d == 0; }
  double value() const;

  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator/(const Rat& o) const;
  bool operator<(const Rat& o) const;
  bool operator<=(const Rat& o) const;
  bool operator==(const Rat& o) const;
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }
};

Rat conjugate(const Rat& x);  // x/(x-1), 1 -> inf, inf -> 1

struct Assumption {
  bool rejected = false;       // standing assumption st < s' violated
  std::string reject_reason;
  bool feasible = false;
  double margin = 0;           // 1/p + st'/(s pt) - 1 - 1/(d-1); +inf if st=1
};

/// Theorem-level admissibility of the Lebesgue indices.
Assumption check_assumption(int d, const Rat& s, const Rat& p, const Rat& st,
                            const Rat& pt);

struct FeasibilityReport {
  bool rejected = false;
  std::string reject_reason;
  bool feasible = false;

  double margin = 0;
  double alpha_lo = 0, alpha_hi = 0;  // open window; hi may be +inf
  double alpha_cap = 2.0;             // policy cap when the window is unbounded
  double alpha = 0;
  double beta_lo = 0, beta_hi = 0, beta = 0;
  double gamma = 0;
  std::vector<std::string> binding_constraints;

  bool diffusion = false;
  double alpha_min = 0;  // s~ = 1 diffusion case: minimal alpha by bisection
};

FeasibilityReport solve_exponents(int d, const Rat& s, const Rat& p,
                                  const Rat& st, const Rat& pt);

FeasibilityReport solve_exponents_diffusion(int d, const Rat& s, const Rat& p,
                                            const Rat& st, const Rat& pt,
                                            const Rat& sbar, int mbar, int k);

/// Concrete parameters for one perturbation step.
struct ParameterSet {
  int d = 2;
  double s = 2, p = 2, st = 1, pt = 1;
  double alpha = 0, beta = 0, gamma = 0;
  double mu = 4;
  int sigma = 1;
  double kappa = 2;
  int lambda = 2;
  double nu = 0.25;
  int N = 4;
  double eta = 1, delta = 1, eps = 0, M = 1;
  bool mu_reduced = false;
  double mu_requested = 0;
  std::vector<std::string> notes;
};

/// Integer (sigma, lambda) and kappa from the report's exponents, respecting
/// the grid guards sigma*mu <= nx/8 and lambda*kappa <= nt/8. Exponents are
/// clamped toward their window edges first; mu is reduced only if no choice
/// inside the windows fits, and the reduction is reported.
ParameterSet concretize(const FeasibilityReport& rep, int d, const Rat& s,
                        const Rat& p, const Rat& st, const Rat& pt, double mu,
                        const Grid& grid);

/// Direct-substitution slack of the exponent inequalities at (alpha, beta,
/// gamma); positive means strictly inside.
double window_slack(int d, double s, double p, double st, double pt,
                    double alpha, double beta, double gamma);

}  // namespace citl
