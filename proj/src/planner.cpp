#include "citl/planner.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace citl {

Rat::Rat(long long num, long long den) : n(num), d(den) {
  if (den == 0) throw std::invalid_argument("Rat: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  long long g = std::gcd(std::abs(n), d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
}

Rat Rat::parse(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") return inf();
  auto slash = text.find('/');
  if (slash != std::string::npos)
    return Rat(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rat(std::stoll(text), 1);
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  long long den = 1;
  for (size_t i = dot + 1; i < text.size(); ++i) den *= 10;
  return Rat(std::stoll(digits), den);
}

Rat Rat::from_double(double v) {
  if (std::isinf(v)) return inf();
  // continued-fraction snap with denominator cap; exact for typical inputs
  long long best_n = 0, best_d = 1;
  double best_err = std::abs(v);
  long long pn = 1, pd = 0, qn = 0, qd = 1;
  double x = v;
  for (int it = 0; it < 40; ++it) {
    double fl = std::floor(x);
    long long a = (long long)fl;
    long long cn = a * pn + qn, cd = a * pd + qd;
    if (cd > 1000000 || cd < 0) break;
    double err = std::abs(v - double(cn) / double(cd));
    if (err < best_err) {
      best_err = err;
      best_n = cn;
      best_d = cd;
    }
    if (err < 1e-14 * std::max(1.0, std::abs(v))) break;
    double frac = x - fl;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
    qn = pn;
    qd = pd;
    pn = cn;
    pd = cd;
  }
  if (best_d == 0) return Rat(0, 1);
  return Rat(best_n, best_d);
}

namespace {
constexpr double kInfD = std::numeric_limits<double>::infinity();
}

double Rat::value() const { return is_inf() ? kInfD : double(n) / double(d); }

Rat Rat::operator+(const Rat& o) const {
  if (is_inf() || o.is_inf()) return inf();
  return Rat(n * o.d + o.n * d, d * o.d);
}
Rat Rat::operator-(const Rat& o) const {
  if (is_inf()) return inf();
  if (o.is_inf()) throw std::domain_error("Rat: inf subtraction");
  return Rat(n * o.d - o.n * d, d * o.d);
}
Rat Rat::operator*(const Rat& o) const {
  if (is_inf() || o.is_inf()) return inf();
  return Rat(n * o.n, d * o.d);
}
Rat Rat::operator/(const Rat& o) const {
  if (o.is_inf()) return Rat(0, 1);
  if (is_inf()) return inf();
  if (o.n == 0) throw std::domain_error("Rat: division by zero");
  return Rat(n * o.d, d * o.n);
}
bool Rat::operator<(const Rat& o) const {
  if (is_inf()) return false;
  if (o.is_inf()) return true;
  return n * o.d < o.n * d;
}
bool Rat::operator<=(const Rat& o) const { return *this < o || *this == o; }
bool Rat::operator==(const Rat& o) const {
  if (is_inf() || o.is_inf()) return is_inf() && o.is_inf();
  return n == o.n && d == o.d;
}

Rat conjugate(const Rat& x) {
  if (x == Rat(1)) return Rat::inf();
  if (x.is_inf()) return Rat(1);
  return x / (x - Rat(1));
}

Assumption check_assumption(int d, const Rat& s, const Rat& p, const Rat& st,
                            const Rat& pt) {
  Assumption a;
  Rat sp = conjugate(s);
  if (!(st < sp)) {
    a.rejected = true;
    a.reject_reason =
        "standing assumption 1 <= s~ < s' violated (s~ >= s')";
    return a;
  }
  if (st < Rat(1) || s < Rat(1) || p < Rat(1) || pt < Rat(1)) {
    a.rejected = true;
    a.reject_reason = "Lebesgue indices must be >= 1";
    return a;
  }
  Rat stp = conjugate(st);
  if (stp.is_inf()) {
    a.feasible = true;
    a.margin = kInfD;
    return a;
  }
  // margin = 1/p + st'/(s pt) - 1 - 1/(d-1)
  Rat lhs = Rat(1) / p + stp / (s * pt);
  Rat rhs = Rat(1) + Rat(1, d - 1);
  a.feasible = rhs < lhs;
  a.margin = (lhs - rhs).value();
  return a;
}

FeasibilityReport solve_exponents(int d, const Rat& s, const Rat& p,
                                  const Rat& st, const Rat& pt) {
  FeasibilityReport rep;
  Assumption a = check_assumption(d, s, p, st, pt);
  rep.margin = a.margin;
  if (a.rejected) {
    rep.rejected = true;
    rep.reject_reason = a.reject_reason;
    return rep;
  }
  if (!a.feasible) {
    rep.feasible = false;
    rep.binding_constraints.push_back("index assumption margin <= 0");
    return rep;
  }
  rep.feasible = true;
  const double sv = s.value(), pv = p.value(), stv = st.value(), ptv = pt.value();
  const double ppv = conjugate(p).value();
  const double spv = conjugate(s).value();
  const double inv_pp = std::isinf(ppv) ? 0.0 : 1.0 / ppv;
  const double inv_sp = std::isinf(spv) ? 0.0 : 1.0 / spv;
  const Rat stp = conjugate(st);

  rep.alpha_lo = 0.0;
  rep.alpha_hi = stp.is_inf()
                     ? kInfD
                     : (d - 1) * stp.value() / (sv * ptv) - 1.0 - (d - 1) * inv_pp;
  double hi_eff = std::min(rep.alpha_hi, rep.alpha_cap);
  if (std::isinf(rep.alpha_hi))
    rep.binding_constraints.push_back("alpha window unbounded; policy cap 2");
  rep.alpha = 0.5 * hi_eff;

  auto beta_lower = [&](double alpha) {
    return (alpha + 1.0 + (d - 1) * inv_pp - (d - 1) / ptv) /
           (1.0 / stv - inv_sp);
  };
  double lo = std::max(0.0, beta_lower(rep.alpha));
  double hi0 = (rep.alpha + 1.0 + (d - 1) * inv_pp) * sv;
  if (!(lo < hi0))
    throw std::logic_error("solve_exponents: empty beta window despite feasible margin");
  double gamma_max = (hi0 - lo) / sv;
  rep.gamma = std::min(0.05, 0.5 * gamma_max);
  rep.beta_lo = lo;
  rep.beta_hi = hi0 - rep.gamma * sv;
  rep.beta = 0.5 * (rep.beta_lo + rep.beta_hi);
  return rep;
}

namespace {
double neg_part(double a) { return std::max(0.0, -a); }
}  // namespace

FeasibilityReport solve_exponents_diffusion(int d, const Rat& s, const Rat& p,
                                            const Rat& st, const Rat& pt,
                                            const Rat& sbar, int mbar, int k) {
  FeasibilityReport rep;
  rep.diffusion = true;
  Assumption a = check_assumption(d, s, p, st, pt);
  rep.margin = a.margin;
  if (a.rejected) {
    rep.rejected = true;
    rep.reject_reason = a.reject_reason;
    return rep;
  }
  if (!(sbar < s)) {
    rep.rejected = true;
    rep.reject_reason = "requires 1 <= s_bar < s";
    return rep;
  }
  const double sv = s.value(), pv = p.value(), stv = st.value(), ptv = pt.value();
  const double sbv = sbar.value();
  const double ppv = conjugate(p).value();
  const double spv = conjugate(s).value();
  const double inv_pp = std::isinf(ppv) ? 0.0 : 1.0 / ppv;
  const double inv_sp = std::isinf(spv) ? 0.0 : 1.0 / spv;
  const bool st_one = (st == Rat(1));
  (void)pv;

  // admissibility of (m_bar, k)
  double mbar_cap = st_one
                        ? sv / sbv - 1.0
                        : sv / sbv - 1.0 -
                              (d - 1) * neg_part(sv / (sbv * ppv) - 1.0);
  double k_cap = st_one ? sv / spv + 1.0
                        : sv / spv + 1.0 -
                              (d - 1) * inv_pp * neg_part(sv / spv - 1.0);
  if (!(mbar < mbar_cap)) {
    rep.rejected = true;
    rep.reject_reason = "m_bar bound violated: need m_bar < " +
                        std::to_string(mbar_cap);
    return rep;
  }
  if (!(k < k_cap)) {
    rep.rejected = true;
    rep.reject_reason = "k bound violated: need k < " + std::to_string(k_cap);
    return rep;
  }
  if (!a.feasible) {
    rep.feasible = false;
    rep.binding_constraints.push_back("index assumption margin <= 0");
    return rep;
  }

  auto beta1 = [&](double al) {
    return ((al + 1.0) * mbar + (d - 1) / pv) / (1.0 / sbv - 1.0 / sv);
  };
  auto beta2 = [&](double al) {
    return (al + 1.0 + (d - 1) * inv_pp - (d - 1) / ptv) / (1.0 / stv - inv_sp);
  };
  auto beta3 = [&](double al) {
    return ((al + 1.0) * (k - 1) - (d - 1) * inv_pp) * spv;
  };
  auto beta40 = [&](double al) { return (al + 1.0 + (d - 1) * inv_pp) * sv; };
  auto admissible = [&](double al) {
    return beta40(al) > std::max({beta1(al), beta2(al), beta3(al), 0.0});
  };

  if (st_one) {
    // alpha can always be taken large; report the minimal workable alpha
    double lo = 0.0, hi = 1.0;
    while (!admissible(hi) && hi < 1e6) hi *= 2;
    if (!admissible(hi))
      throw std::logic_error("solve_exponents_diffusion: no admissible alpha");
    if (admissible(lo)) {
      rep.alpha_min = 0.0;
    } else {
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (admissible(mid) ? hi : lo) = mid;
      }
      rep.alpha_min = hi;
    }
    rep.feasible = true;
    rep.alpha_lo = rep.alpha_min;
    rep.alpha_hi = kInfD;
    rep.binding_constraints.push_back(
        "s~ = 1: alpha sufficiently large; minimal alpha by bisection");
    rep.alpha = rep.alpha_min + 0.5;
  } else {
    const Rat stp = conjugate(st);
    double a1 = (d - 1) * stp.value() / (sv * ptv) - 1.0 - (d - 1) * inv_pp;
    double denom_m = mbar + 1.0 - sv / sbv;  // negative by admissibility
    double a2 = (d - 1) * (sv / (sbv * ppv) - 1.0) / denom_m - 1.0;
    double denom_k = k - 1.0 - sv / spv;     // negative by admissibility
    double a3 = (d - 1) * inv_pp * (sv / spv - 1.0) / denom_k - 1.0;
    rep.alpha_lo = std::max({0.0, a2, a3});
    rep.alpha_hi = a1;
    if (!(rep.alpha_lo < rep.alpha_hi)) {
      rep.feasible = false;
      rep.binding_constraints.push_back("alpha window empty");
      return rep;
    }
    rep.feasible = true;
    rep.alpha = 0.5 * (rep.alpha_lo + std::min(rep.alpha_hi, rep.alpha_cap + rep.alpha_lo));
    if (!admissible(rep.alpha))
      throw std::logic_error("solve_exponents_diffusion: midpoint not admissible");
  }

  double bl = std::max({beta1(rep.alpha), beta2(rep.alpha), beta3(rep.alpha), 0.0});
  double bh0 = beta40(rep.alpha);
  double gamma_max = (bh0 - bl) / sv;
  rep.gamma = std::min(0.05, 0.5 * gamma_max);
  rep.beta_lo = bl;
  rep.beta_hi = bh0 - rep.gamma * sv;
  rep.beta = 0.5 * (rep.beta_lo + rep.beta_hi);
  return rep;
}

double window_slack(int d, double s, double p, double st, double pt,
                    double alpha, double beta, double gamma) {
  double pp = (p == 1.0) ? kInfD : p / (p - 1.0);
  double sp = (s == 1.0) ? kInfD : s / (s - 1.0);
  double inv_pp = std::isinf(pp) ? 0.0 : 1.0 / pp;
  double inv_sp = std::isinf(sp) ? 0.0 : 1.0 / sp;
  // two strict inequalities of the exponent system
  double i1 = -(alpha + 1.0 + (d - 1) * inv_pp - (d - 1) / pt + beta * inv_sp -
                beta / st);
  double i2 = -(-alpha - 1.0 - (d - 1) * inv_pp + gamma + beta / s);
  return std::min({i1, i2, alpha, beta, gamma});
}

ParameterSet concretize(const FeasibilityReport& rep, int d, const Rat& s,
                        const Rat& p, const Rat& st, const Rat& pt, double mu,
                        const Grid& grid) {
  if (!rep.feasible)
    throw std::invalid_argument("concretize: infeasible report");
  if (mu < 2.0) throw std::invalid_argument("concretize: mu >= 2 required");
  ParameterSet ps;
  ps.d = d;
  ps.s = s.value();
  ps.p = p.value();
  ps.st = st.value();
  ps.pt = pt.value();
  ps.mu_requested = mu;

  const double sv = ps.s, stv = ps.st, ptv = ps.pt;
  const double ppv = conjugate(p).value();
  const double spv = conjugate(s).value();
  const double inv_pp = std::isinf(ppv) ? 0.0 : 1.0 / ppv;
  const double inv_sp = std::isinf(spv) ? 0.0 : 1.0 / spv;
  auto beta_lower = [&](double alpha) {
    return std::max(0.0, (alpha + 1.0 + (d - 1) * inv_pp - (d - 1) / ptv) /
                             (1.0 / stv - inv_sp));
  };

  const double sig_cap = grid.nx / 8.0;
  const double tem_cap = grid.nt / 8.0;

  double mu_try = mu;
  while (mu_try >= 2.0) {
    // sigma from alpha, clamped to the spatial guard; if the temporal window
    // cannot accommodate the implied beta floor, step sigma down (smaller
    // alpha lowers the floor) before giving up on this mu
    int sigma0 = std::max(1, int(std::lround(std::pow(mu_try, rep.alpha))));
    while (sigma0 > 1 && sigma0 * mu_try > sig_cap) --sigma0;
    if (sigma0 * mu_try > sig_cap) {
      ps.notes.push_back("spatial guard: even sigma = 1 fails at mu = " +
                         std::to_string(mu_try));
      mu_try = std::floor(mu_try / 2.0);
      continue;
    }
    bool placed = false;
    double alpha = 0, beta = 0, gamma = 0, kappa = 0;
    int sigma = sigma0, lambda = 2;
    for (; sigma >= 1; --sigma) {
      alpha = (sigma > 1) ? std::log(double(sigma)) / std::log(mu_try)
                          : std::min(rep.alpha, std::log(1.4) / std::log(mu_try));
      // window bookkeeping uses the planner's gamma; the concrete lambda may
      // sit at its floor of 2 and is recorded separately
      lambda = std::max(2, int(std::lround(std::pow(mu_try, rep.gamma))));
      gamma = rep.gamma;
      double blo = beta_lower(alpha);
      double bhi0 = (alpha + 1.0 + (d - 1) * inv_pp) * sv;
      double beta_cap_guard = std::log(tem_cap / lambda) / std::log(mu_try);
      double bhi = std::min(bhi0 - gamma * sv, beta_cap_guard);
      double margin = 0.02 * std::max(1e-3, bhi0 - blo);
      beta = 0.5 * (blo + bhi0 - rep.gamma * sv);  // report midpoint
      if (beta > bhi - margin) beta = bhi - margin;
      if (!(beta > blo)) continue;
      kappa = std::pow(mu_try, beta);
      if (lambda * kappa > tem_cap + 1e-9) continue;
      placed = true;
      break;
    }
    if (!placed) {
      ps.notes.push_back("temporal guard: beta window empties at mu = " +
                         std::to_string(mu_try));
      mu_try = std::floor(mu_try / 2.0);
      continue;
    }
    ps.mu = mu_try;
    ps.mu_reduced = (mu_try != mu);
    if (ps.mu_reduced)
      ps.notes.push_back("mu reduced from " + std::to_string(mu) + " to " +
                         std::to_string(mu_try) + " by grid guards");
    ps.alpha = alpha;
    ps.beta = beta;
    ps.gamma = gamma;
    ps.sigma = sigma;
    ps.lambda = lambda;
    ps.kappa = kappa;
    ps.nu = 0.25;
    double need = beta / sv + std::max(0.0, (d - 1) / ps.p - (d - 1) / 2.0);
    ps.N = std::min(10, std::max(3, int(std::ceil(need / std::max(alpha, 0.25))) + 2));
    double slack = window_slack(d, sv, ps.p, stv, ptv, alpha, beta, gamma);
    ps.notes.push_back("window slack " + std::to_string(slack));
    return ps;
  }
  throw std::runtime_error(
      "concretize: capacity error, no mu >= 2 satisfies the Nyquist guards (binding: " +
      std::string(mu * std::pow(mu, rep.alpha) > sig_cap ? "sigma*mu <= nx/8"
                                                         : "lambda*kappa <= nt/8") +
      ")");
}

}  // namespace citl
