#include "citl/harness.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "citl/norms.hpp"
#include "citl/rng.hpp"

namespace citl {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("parse_config: cannot open " + path);
  RunConfig cfg;
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("parse_config: bad line: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "scenario") cfg.scenario = val;
    else if (key == "d") cfg.d = std::stoi(val);
    else if (key == "nx") cfg.nx = std::stoi(val);
    else if (key == "nt") cfg.nt = std::stoi(val);
    else if (key == "s") cfg.s = val;
    else if (key == "p") cfg.p = val;
    else if (key == "st") cfg.st = val;
    else if (key == "pt") cfg.pt = val;
    else if (key == "sbar") cfg.sbar = val;
    else if (key == "mbar") cfg.mbar = std::stoi(val);
    else if (key == "k_order") cfg.k_order = std::stoi(val);
    else if (key == "has_diffusion") cfg.has_diffusion = (val == "true" || val == "1");
    else if (key == "mu") cfg.mu = std::stod(val);
    else if (key == "n_steps") cfg.n_steps = std::stoi(val);
    else if (key == "mu_ladder") {
      std::stringstream ss(val);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.mu_ladder.push_back(std::stod(trim(tok)));
    } else if (key == "delta") cfg.delta = std::stod(val);
    else if (key == "eta") cfg.eta = std::stod(val);
    else if (key == "eps") cfg.eps = std::stod(val);
    else if (key == "nu") cfg.nu = std::stod(val);
    else if (key == "alpha_override") cfg.alpha_override = std::stod(val);
    else if (key == "beta_override") cfg.beta_override = std::stod(val);
    else if (key == "gamma_override") cfg.gamma_override = std::stod(val);
    else if (key == "rho_shape") cfg.rho_shape = val;
    else if (key == "rho_amp") cfg.rho_amp = std::stod(val);
    else if (key == "u_shear") cfg.u_shear = std::stod(val);
    else if (key == "seed") cfg.seed = unsigned(std::stoul(val));
    else if (key == "out_dir") cfg.out_dir = val;
    else if (key == "dump_fields") cfg.dump_fields = (val == "true" || val == "1");
    else if (key == "tol_scale") cfg.tol_scale = std::stod(val);
    else throw std::runtime_error("parse_config: unknown key " + key);
  }
  return cfg;
}

Triple initial_triple(const SpaceTimeField& rho_tilde) {
  const Grid& g = rho_tilde.grid();
  Vec means = spatial_means(rho_tilde);
  double drift = (means - means(0)).abs().maxCoeff();
  if (drift > 1e-8 * std::max(1.0, rho_tilde.max_abs()))
    throw std::invalid_argument(
        "initial_triple: spatial mean of rho~ varies in time");
  Triple T;
  T.rho = rho_tilde;
  T.u = SpaceTimeField::vector(g);
  SpaceTimeField dtr = derivative(rho_tilde, kTimeAxis, 1);
  T.R = anti_divergence(dtr);
  return T;
}

namespace {

TrigPoly normalized_density_poly(int d, double p, unsigned seed, double amp,
                                 const Grid& g) {
  std::mt19937_64 rng(seed);
  TrigPoly poly = TrigPoly::random(d, 1, 3, rng);
  // normalize ||rho_bar||_{L^p} = amp on the grid
  SpaceTimeField probe(Grid(d, g.nx, 8), 1);
  fill_from_poly(probe, poly);
  double n0 = lp_norm_slice(probe.slice(0, 0).abs(), p);
  for (auto& m : poly.modes) m.amp *= amp / n0;
  return poly;
}

}  // namespace

double nonuniqueness_chi(double t) {
  // 1 on |t-1/2| <= 1/4, 0 on |t-1/2| >= 3/8, smooth monotone ramps between
  double left = Smoothstep::value((t - 0.125) / 0.125);
  double right = 1.0 - Smoothstep::value((t - 0.75) / 0.125);
  return left * right;
}

SpaceTimeField ramp_bump_density(const Grid& g, double amp, unsigned seed) {
  // gentle monotone ramp in time (interior-supported time derivative)
  TrigPoly poly = normalized_density_poly(g.d, 2.0, seed, amp, g);
  SpaceTimeField f = SpaceTimeField::scalar(g);
  const long nsp = g.spatial_points();
  Vec shape(nsp);
  {
    SpaceTimeField probe(Grid(g.d, g.nx, 8), 1);
    fill_from_poly(probe, poly);
    shape = probe.slice(0, 0);
  }
  for (int k = 0; k < g.nt; ++k) {
    double q = Smoothstep::value((g.time(k) - 0.125) / 0.75);
    f.slice(0, k) = q * shape;
  }
  return f;
}

Triple manufactured_triple(const Grid& g, double rho_amp, double u_amp,
                           unsigned seed) {
  TrigPoly poly = normalized_density_poly(g.d, 2.0, seed, rho_amp, g);
  SpaceTimeField rho = SpaceTimeField::scalar(g);
  const long nsp = g.spatial_points();
  Vec shape(nsp);
  {
    SpaceTimeField probe(Grid(g.d, g.nx, 8), 1);
    fill_from_poly(probe, poly);
    shape = probe.slice(0, 0);
  }
  for (int k = 0; k < g.nt; ++k) {
    double t = g.time(k);
    double q = Smoothstep::value((t - 0.125) / 0.125) *
               (1.0 - Smoothstep::value((t - 0.75) / 0.125));
    rho.slice(0, k) = q * shape;
  }
  Triple T;
  T.u = SpaceTimeField::vector(g);
  if (u_amp != 0.0)
    T.u.fill_spatial(0, [u_amp](const std::array<double, 3>& x) {
      return u_amp * std::sin(kTwoPi * x[1]);
    });
  // R = antidiv(d_t rho + div(rho u))
  SpaceTimeField rhs = derivative(rho, kTimeAxis, 1);
  {
    SliceFFT fft(g);
    Vec tmp(nsp);
    for (int k = 0; k < g.nt; ++k)
      for (int r = 0; r < g.d; ++r) {
        Vec prod = rho.slice(0, k) * T.u.slice(r, k);
        slice_derivative(fft, prod.data(), tmp.data(), r, 1);
        rhs.slice(0, k) += tmp;
      }
  }
  T.R = anti_divergence(rhs);
  T.rho = std::move(rho);
  return T;
}

ParameterSet plan_step_params(const RunConfig& cfg, const Grid& g, double mu) {
  ParameterSet ps;
  if (cfg.alpha_override > 0 || cfg.beta_override > 0 || cfg.gamma_override > 0) {
    ps.d = cfg.d;
    ps.s = Rat::parse(cfg.s).value();
    ps.p = Rat::parse(cfg.p).value();
    ps.st = Rat::parse(cfg.st).value();
    ps.pt = Rat::parse(cfg.pt).value();
    ps.alpha = cfg.alpha_override;
    ps.beta = cfg.beta_override;
    ps.gamma = cfg.gamma_override;
    ps.mu = mu;
    ps.mu_requested = mu;
    ps.sigma = std::max(1, int(std::lround(std::pow(mu, ps.alpha))));
    ps.lambda = std::max(2, int(std::lround(std::pow(mu, ps.gamma))));
    ps.kappa = std::pow(mu, ps.beta);
    check_spatial_guard(g, ps.sigma * mu, "explicit exponent ladder");
    check_temporal_guard(g, ps.lambda * ps.kappa, "explicit exponent ladder");
    ps.N = 4;
    ps.notes.push_back("explicit exponent ladder from config");
  } else {
    FeasibilityReport rep =
        solve_exponents(cfg.d, Rat::parse(cfg.s), Rat::parse(cfg.p),
                        Rat::parse(cfg.st), Rat::parse(cfg.pt));
    if (rep.rejected) throw std::invalid_argument("planner: " + rep.reject_reason);
    if (!rep.feasible)
      throw std::invalid_argument("planner: indices infeasible");
    ps = concretize(rep, cfg.d, Rat::parse(cfg.s), Rat::parse(cfg.p),
                    Rat::parse(cfg.st), Rat::parse(cfg.pt), mu, g);
  }
  ps.delta = cfg.delta;
  ps.eta = (cfg.eta > 0) ? cfg.eta : 1.0;
  if (cfg.nu > 0) ps.nu = cfg.nu;
  return ps;
}

StepRecord run_step(Triple& T, const ParameterSet& ps, const RunConfig& cfg) {
  const Grid& g = T.rho.grid();
  const int d = g.d;
  StepRecord rec;

  StepParams prm;
  prm.s = ps.s;
  prm.p = ps.p;
  prm.st = ps.st;
  prm.pt = ps.pt;
  prm.mu = ps.mu;
  prm.sigma = ps.sigma;
  prm.kappa = ps.kappa;
  prm.lambda = ps.lambda;
  prm.eta = ps.eta;
  prm.delta = ps.delta;
  prm.N = ps.N;
  prm.seed = cfg.seed;

  rec.r_old_l1 = l1_norm(T.R);
  rec.r_old_linf = sup_norm(T.R);

  // cutoffs, with the budget raised when the grid cannot resolve the bands
  CutoffSet cut;
  for (int attempt = 0;; ++attempt) {
    prm.r = choose_margin(T.R, prm.delta);
    try {
      cut = build_cutoffs(T.R, prm.delta, prm.r);
      break;
    } catch (const std::runtime_error& e) {
      if (attempt >= 8) throw;
      prm.delta *= 2.0;  // effective budget recorded in the step report
    }
  }
  CoefficientFields cf = build_coefficients(cut, T.R, prm.s, prm.p);
  std::vector<SpaceTimeField> P = cutoff_products(cut, T.R);
  {
    double worst = 0;
    for (int j = 0; j < d; ++j) {
      if (!cf.active[j]) continue;
      double e = (cf.a[j].comp(0) * cf.b[j].comp(0) + P[j].comp(0)).abs().maxCoeff();
      worst = std::max(worst, e);
    }
    rec.ajbj_err = worst;
    for (auto& c : cut.chi) c.release();
  }

  std::vector<MikadoTriple> mik;
  std::vector<TemporalTriple> tmp;
  for (int j = 1; j <= d; ++j) {
    mik.push_back(build_mikado(j, prm.mu, prm.sigma, prm.p, d, g));
    tmp.push_back(build_temporal(j, prm.kappa, prm.lambda, prm.s, g.nt, d));
  }

  // atlas: traced when the flow deformation stays resolvable, else frozen
  rec.flow_stiff = flow_stiffness(T.u);
  FlowOptions fopt;
  double nu = 1.0;
  if (rec.flow_stiff < 1e-12) {
    nu = 1.0;  // identity flow
  } else if (ps.nu > 0) {
    nu = ps.nu;
    if (rec.flow_stiff * nu > 3.0) fopt.frozen = true;
  } else {
    double nu_need = 0.25 / rec.flow_stiff;
    int D = 1;
    while (1.0 / D > nu_need && D < 1024) D *= 2;
    if (D > std::max(1, g.nt / 16))
      fopt.frozen = true;  // charts would be thinner than the time grid
    else
      nu = 1.0 / D;
  }
  if (fopt.frozen) nu = 1.0;
  ChartAtlas atlas = build_atlas(T.u, nu, prm.lambda, fopt);
  rec.frozen = fopt.frozen;
  rec.nu = nu;
  rec.D = atlas.D;
  rec.atlas_det_err = atlas.max_det_err();
  rec.atlas_dev = atlas.max_invgrad_dev();

  PerturbationBundle bundle =
      build_perturbation(atlas, cf, P, mik, tmp, prm.eta);
  rec.mean_theta_violation = bundle.mean_violation();

  // div w check before consolidation
  {
    SliceFFT fft(g);
    Vec tmpv(g.spatial_points());
    double div_sup = 0, grad_sup = 0;
    for (int k = 0; k < g.nt; ++k) {
      Vec div = Vec::Zero(g.spatial_points());
      for (int r = 0; r < d; ++r) {
        Vec w = bundle.w_p.slice(r, k) + bundle.w_c.slice(r, k);
        for (int a = 0; a < d; ++a) {
          slice_derivative(fft, w.data(), tmpv.data(), a, 1);
          if (a == r) div += tmpv;
          grad_sup = std::max(grad_sup, tmpv.abs().maxCoeff());
        }
      }
      div_sup = std::max(div_sup, div.abs().maxCoeff());
    }
    rec.div_w_rel = div_sup / std::max(1.0, grad_sup);
  }

  DefectBuildResult defect = build_defect(T.rho, T.u, T.R, atlas, cf, P, bundle,
                                          mik, tmp, prm.eta, prm.sigma);
  rec.components = defect.stats;
  rec.r1_l1 = defect.l1_total;
  rec.table = lemma_norm_table(defect, bundle, prm, d);

  rec.prop31 =
      verify_prop31(bundle.theta(), bundle.w(), T.R, defect.l1_total, prm);
  rec.prm = prm;

  // new triple in place
  T.rho.comp(0) += bundle.theta().comp(0);
  for (int r = 0; r < d; ++r) T.u.comp(r) += bundle.w().comp(r);
  T.R = std::move(defect.total);

  rec.cde_out = verify_cde(T.rho, T.u, T.R, double(prm.lambda) * prm.kappa);
  rec.accepted = rec.r1_l1 < rec.r_old_l1;

  if (cfg.dump_fields && !cfg.out_dir.empty()) {
    ensure_dir(cfg.out_dir);
    dump_field(bundle.theta(), cfg.out_dir + "/theta.citl");
    dump_field(bundle.w(), cfg.out_dir + "/w.citl");
    dump_field(T.R, cfg.out_dir + "/R1.citl");
  }
  return rec;
}

TrajectoryReport run_iteration(const RunConfig& cfg, Triple* final_triple) {
  Grid g(cfg.d, cfg.nx, cfg.nt);
  SpaceTimeField rho_tilde =
      (cfg.scenario == "demo")
          ? [&] {
              TrigPoly poly = normalized_density_poly(
                  cfg.d, Rat::parse(cfg.p).value(), cfg.seed, cfg.rho_amp, g);
              SpaceTimeField f = SpaceTimeField::scalar(g);
              Vec shape(g.spatial_points());
              {
                SpaceTimeField probe(Grid(cfg.d, g.nx, 8), 1);
                fill_from_poly(probe, poly);
                shape = probe.slice(0, 0);
              }
              for (int k = 0; k < g.nt; ++k)
                f.slice(0, k) = nonuniqueness_chi(g.time(k)) * shape;
              return f;
            }()
          : ramp_bump_density(g, cfg.rho_amp, cfg.seed);

  TrajectoryReport rep;
  Triple T = initial_triple(rho_tilde);
  rep.r1_initial_l1 = l1_norm(T.R);

  const double pval = Rat::parse(cfg.p).value();
  double eps = cfg.eps > 0
                   ? cfg.eps
                   : 0.25 * std::pow(0.25, 1.0 / Rat::parse(cfg.s).value());

  // calibration prepass on a coarse grid: provisional M = 1, then work with
  // twice the measured constant
  double M = 1.0;
  {
    RunConfig ccfg = cfg;
    ccfg.nx = std::min(cfg.nx, 64);
    ccfg.nt = std::min(cfg.nt, 64);
    ccfg.dump_fields = false;
    Grid gc(cfg.d, ccfg.nx, ccfg.nt);
    SpaceTimeField rtc =
        (cfg.scenario == "demo")
            ? [&] {
                TrigPoly poly = normalized_density_poly(cfg.d, pval, cfg.seed,
                                                        cfg.rho_amp, gc);
                SpaceTimeField f = SpaceTimeField::scalar(gc);
                Vec shape(gc.spatial_points());
                {
                  SpaceTimeField probe(Grid(cfg.d, gc.nx, 8), 1);
                  fill_from_poly(probe, poly);
                  shape = probe.slice(0, 0);
                }
                for (int k = 0; k < gc.nt; ++k)
                  f.slice(0, k) = nonuniqueness_chi(gc.time(k)) * shape;
                return f;
              }()
            : ramp_bump_density(gc, cfg.rho_amp, cfg.seed);
    Triple Tc = initial_triple(rtc);
    ParameterSet psc = plan_step_params(ccfg, gc, std::min(cfg.mu, 4.0));
    psc.eta = 1.0;
    psc.delta = std::max(cfg.delta, sup_norm(Tc.R));
    StepRecord rc = run_step(Tc, psc, ccfg);
    M = 2.0 * std::max(rc.prop31.measured_M, 1e-6);
  }
  rep.measured_M = M;
  rep.schedule = build_schedule(eps, pval, M, cfg.n_steps + 1);

  for (int n = 1; n <= cfg.n_steps; ++n) {
    double mu_n = (int(cfg.mu_ladder.size()) >= n) ? cfg.mu_ladder[n - 1]
                                                   : cfg.mu * std::pow(2.0, n - 1);
    ParameterSet ps = plan_step_params(cfg, g, mu_n);
    ps.delta = std::max(rep.schedule.delta[n + 1], cfg.delta);
    ps.eta = (n == 1) ? rep.schedule.eta1(l1_norm(T.R)) : rep.schedule.eta[n];
    ps.M = M;
    rep.steps.push_back(run_step(T, ps, cfg));
  }

  // deviation and profile of the final density
  {
    SpaceTimeField diff = T.rho;
    diff -= rho_tilde;
    rep.final_deviation =
        lpq_norm(diff, Rat::parse(cfg.s).value(), pval);
    rep.profile_lp.resize(g.nt);
    for (int k = 0; k < g.nt; ++k)
      rep.profile_lp(k) = lp_norm_slice(T.rho.slice(0, k).abs(), pval);
  }
  if (final_triple) *final_triple = std::move(T);
  return rep;
}

NonuniquenessReport nonuniqueness_scenario(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.scenario = "demo";
  NonuniquenessReport rep;
  rep.eps_budget = c.eps > 0
                       ? c.eps
                       : 0.25 * std::pow(0.25, 1.0 / Rat::parse(c.s).value());
  rep.traj = run_iteration(c);
  rep.achieved_deviation = rep.traj.final_deviation;
  rep.budget_met = rep.achieved_deviation <= rep.eps_budget;

  const Grid g(c.d, c.nx, c.nt);
  const Vec& prof = rep.traj.profile_lp;
  double mid_acc = 0, mid_w = 0, end_acc = 0, end_w = 0;
  for (int k = 0; k < g.nt; ++k) {
    double t = g.time(k);
    double w = (k == 0 || k == g.nt - 1) ? 0.5 * g.dt() : g.dt();
    if (t >= 0.25 && t <= 0.75) {
      mid_acc += w * prof(k);
      mid_w += w;
    }
    if (t <= 0.125 || t >= 0.875) {
      end_acc += w * prof(k);
      end_w += w;
    }
  }
  rep.middle_avg = mid_acc / mid_w;
  rep.end_avg = end_acc / end_w;

  const double s = Rat::parse(c.s).value();
  double over = std::max(0.0, rep.achieved_deviation - rep.eps_budget);
  // window average bound carries len^{1/s' - 1} = len^{-1/s}
  auto holder_factor = [&](double len) { return std::pow(len, -1.0 / s); };
  rep.slack_mid = holder_factor(0.5) * over;
  rep.slack_end = holder_factor(0.25) * over;
  rep.middle_gate = 0.75 - rep.slack_mid;
  rep.end_gate = 0.5 + rep.slack_end;
  rep.profile_nonconstant =
      (rep.middle_avg >= rep.middle_gate) && (rep.end_avg <= rep.end_gate);
  rep.zero_solution_residual = 0.0;
  return rep;
}

Json step_record_json(const StepRecord& rec) {
  Json j;
  j["params"] = {{"mu", rec.prm.mu},       {"sigma", rec.prm.sigma},
                 {"kappa", rec.prm.kappa}, {"lambda", rec.prm.lambda},
                 {"eta", rec.prm.eta},     {"delta", rec.prm.delta},
                 {"r", rec.prm.r},         {"N", rec.prm.N}};
  j["atlas"] = {{"D", rec.D},
                {"nu", rec.nu},
                {"frozen", rec.frozen},
                {"det_err", rec.atlas_det_err},
                {"invgrad_dev", rec.atlas_dev},
                {"flow_stiffness", rec.flow_stiff}};
  Json comps = Json::array();
  for (const auto& c : rec.components)
    comps.push_back({{"name", c.name}, {"l1", c.l1}, {"linf", c.linf}});
  j["component_norms"] = comps;
  Json table = Json::array();
  for (const auto& r : rec.table)
    table.push_back(
        {{"name", r.name}, {"measured", r.measured}, {"predicted", r.predicted}});
  j["norm_table"] = table;
  j["cde_residual"] = {{"l1", rec.cde_out.residual_l1},
                       {"linf", rec.cde_out.residual_linf},
                       {"div_R_l1", rec.cde_out.div_r_l1},
                       {"floor", rec.cde_out.floor_l1}};
  j["prop31_report"] = {{"m1", rec.prop31.m1},
                        {"m2", rec.prop31.m2},
                        {"measured_M", rec.prop31.measured_M},
                        {"w_w1p", rec.prop31.w_w1p},
                        {"r1_l1", rec.prop31.r1_l1},
                        {"delta", rec.prop31.delta},
                        {"mean_test_worst", rec.prop31.mean_test_worst},
                        {"N", rec.prop31.N},
                        {"supp_violation", rec.prop31.supp_violation},
                        {"r_eff", rec.prop31.r_eff}};
  j["measured_M"] = rec.prop31.measured_M;
  j["checks"] = {{"ajbj_err", rec.ajbj_err},
                 {"mean_theta_violation", rec.mean_theta_violation},
                 {"div_w_rel", rec.div_w_rel}};
  j["defect"] = {{"old_l1", rec.r_old_l1},
                 {"old_linf", rec.r_old_linf},
                 {"new_l1", rec.r1_l1},
                 {"accepted", rec.accepted}};
  return j;
}

Json trajectory_json(const TrajectoryReport& rep) {
  Json j;
  j["measured_M"] = rep.measured_M;
  j["eps"] = rep.schedule.eps;
  j["r1_initial_l1"] = rep.r1_initial_l1;
  j["final_deviation"] = rep.final_deviation;
  Json deltas = Json::array(), etas = Json::array();
  for (int n = 2; n <= rep.schedule.n_max; ++n) {
    deltas.push_back(rep.schedule.delta[n]);
    etas.push_back(rep.schedule.eta[n]);
  }
  j["schedule"] = {{"delta", deltas},
                   {"eta", etas},
                   {"sum_sqrt_delta", rep.schedule.sum_sqrt_delta()}};
  Json steps = Json::array();
  for (const auto& s : rep.steps) steps.push_back(step_record_json(s));
  j["steps"] = steps;
  return j;
}

Json nonuniqueness_json(const NonuniquenessReport& rep) {
  Json j;
  j["trajectory"] = trajectory_json(rep.traj);
  j["eps_budget"] = rep.eps_budget;
  j["achieved_deviation"] = rep.achieved_deviation;
  j["budget_met"] = rep.budget_met;
  if (!rep.budget_met)
    j["note"] = "deviation budget not met at this truncation";
  j["middle_window_avg"] = rep.middle_avg;
  j["end_window_avg"] = rep.end_avg;
  j["middle_gate"] = rep.middle_gate;
  j["end_gate"] = rep.end_gate;
  j["slack_mid"] = rep.slack_mid;
  j["slack_end"] = rep.slack_end;
  j["profile_nonconstant"] = rep.profile_nonconstant;
  j["zero_solution"] = {{"initial_data", "same (zero)"},
                        {"residual", rep.zero_solution_residual}};
  Json prof = Json::array();
  for (int k = 0; k < rep.traj.profile_lp.size(); ++k)
    prof.push_back(rep.traj.profile_lp(k));
  j["profile_lp"] = prof;
  return j;
}

void write_trajectory_csv(const TrajectoryReport& rep, const std::string& path) {
  CsvWriter csv(path, {"step", "component", "norm_kind", "value",
                       "predicted_scaling", "fitted_slope"});
  for (size_t n = 0; n < rep.steps.size(); ++n) {
    const auto& st = rep.steps[n];
    for (const auto& c : st.components) {
      double pred = 0;
      for (const auto& r : st.table)
        if (r.name == c.name) pred = r.predicted;
      csv.row({std::to_string(n + 1), c.name, "L1", CsvWriter::num(c.l1),
               CsvWriter::num(pred), ""});
      csv.row({std::to_string(n + 1), c.name, "Linf", CsvWriter::num(c.linf),
               "", ""});
    }
  }
}

}  // namespace citl
