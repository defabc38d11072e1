#include <iostream>

#include "CLI11.hpp"
#include "citl/harness.hpp"
#include "citl/norms.hpp"

using namespace citl;

namespace {

RunConfig load_cfg(const std::string& config_path, const std::string& out_dir,
                   bool dump_fields, long seed, double tol_scale) {
  RunConfig cfg;
  if (!config_path.empty()) cfg = parse_config(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (dump_fields) cfg.dump_fields = true;
  if (seed >= 0) cfg.seed = unsigned(seed);
  if (tol_scale > 0) cfg.tol_scale = tol_scale;
  return cfg;
}

int run_plan(const RunConfig& cfg, const std::string& atlas_csv) {
  if (!atlas_csv.empty()) {
    // feasibility region sweep over (s, p, st, pt)
    CsvWriter csv(atlas_csv, {"s", "p", "st", "pt", "feasible", "rejected",
                              "margin", "alpha", "beta", "gamma"});
    std::vector<std::string> svals = {"1", "5/4", "3/2", "2", "3", "4"};
    std::vector<std::string> pvals = {"1", "5/4", "3/2", "2", "3", "4"};
    std::vector<std::string> stvals = {"1", "5/4", "3/2", "2"};
    std::vector<std::string> ptvals = {"1", "3/2", "2", "3"};
    for (const auto& s : svals)
      for (const auto& p : pvals)
        for (const auto& st : stvals)
          for (const auto& pt : ptvals) {
            FeasibilityReport rep =
                solve_exponents(cfg.d, Rat::parse(s), Rat::parse(p),
                                Rat::parse(st), Rat::parse(pt));
            csv.row({s, p, st, pt, rep.feasible ? "1" : "0",
                     rep.rejected ? "1" : "0", CsvWriter::num(rep.margin),
                     CsvWriter::num(rep.alpha), CsvWriter::num(rep.beta),
                     CsvWriter::num(rep.gamma)});
          }
    std::cout << "feasibility region written to " << atlas_csv << "\n";
    return 0;
  }
  FeasibilityReport rep;
  if (cfg.has_diffusion)
    rep = solve_exponents_diffusion(cfg.d, Rat::parse(cfg.s), Rat::parse(cfg.p),
                                    Rat::parse(cfg.st), Rat::parse(cfg.pt),
                                    Rat::parse(cfg.sbar), cfg.mbar, cfg.k_order);
  else
    rep = solve_exponents(cfg.d, Rat::parse(cfg.s), Rat::parse(cfg.p),
                          Rat::parse(cfg.st), Rat::parse(cfg.pt));
  Json j;
  j["rejected"] = rep.rejected;
  if (rep.rejected) j["reject_reason"] = rep.reject_reason;
  j["feasible"] = rep.feasible;
  j["margin"] = std::isinf(rep.margin) ? Json("inf") : Json(rep.margin);
  j["alpha_window"] = {rep.alpha_lo,
                       std::isinf(rep.alpha_hi) ? Json("inf") : Json(rep.alpha_hi)};
  j["alpha"] = rep.alpha;
  j["beta_window"] = {rep.beta_lo, rep.beta_hi};
  j["beta"] = rep.beta;
  j["gamma"] = rep.gamma;
  j["binding_constraints"] = rep.binding_constraints;
  if (rep.diffusion) j["alpha_min"] = rep.alpha_min;
  std::cout << j.dump(2) << "\n";
  std::cout << "\nindices: d=" << cfg.d << " s=" << cfg.s << " p=" << cfg.p
            << " s~=" << cfg.st << " p~=" << cfg.pt << "\n";
  if (rep.rejected)
    std::cout << "REJECTED: " << rep.reject_reason << "\n";
  else if (!rep.feasible)
    std::cout << "INFEASIBLE (margin " << rep.margin << ")\n";
  else
    std::cout << "feasible; alpha=" << rep.alpha << " beta=" << rep.beta
              << " gamma=" << rep.gamma << "\n";
  if (!cfg.out_dir.empty()) {
    ensure_dir(cfg.out_dir);
    write_json(j, cfg.out_dir + "/plan.json");
  }
  return rep.feasible && !rep.rejected ? 0 : 1;
}

int run_blocks(const RunConfig& cfg) {
  std::string path =
      cfg.out_dir.empty() ? "blocks_scaling.csv" : cfg.out_dir + "/blocks_scaling.csv";
  if (!cfg.out_dir.empty()) ensure_dir(cfg.out_dir);
  double p = Rat::parse(cfg.p).value();
  double s = Rat::parse(cfg.s).value();
  auto rows = mikado_scaling_report(cfg.d, p, {4, 8, 16, 32}, 1, {1, 2, 4, 8}, 4.0,
                                    {1.0, 2.0, p}, {0, 1});
  auto trows = temporal_scaling_report(s, {4, 8, 16, 32}, 4, {1.0, 2.0}, {0, 1});
  rows.insert(rows.end(), trows.begin(), trows.end());
  CsvWriter csv(path, {"family", "m", "r", "predicted_slope", "fitted_slope",
                       "residual"});
  double worst = 0;
  for (const auto& r : rows) {
    csv.row({r.field + ":" + r.sweep, std::to_string(r.m), CsvWriter::num(r.r),
             CsvWriter::num(r.predicted), CsvWriter::num(r.fitted),
             CsvWriter::num(r.residual)});
    worst = std::max(worst, std::abs(r.fitted - r.predicted));
  }
  std::cout << "scaling report written to " << path << " (worst |fit-pred| = "
            << worst << ")\n";
  return worst <= 0.1 * cfg.tol_scale ? 0 : 1;
}

int run_flow(const RunConfig& cfg) {
  Grid g(cfg.d, cfg.nx, cfg.nt);
  SpaceTimeField u = SpaceTimeField::vector(g);
  double amp = cfg.u_shear != 0 ? cfg.u_shear : 0.25;
  u.fill_spatial(0, [amp](const std::array<double, 3>& x) {
    return amp * std::sin(kTwoPi * x[1]);
  });
  double nu = cfg.nu > 0 ? cfg.nu : 0.25;
  ChartAtlas atlas = build_atlas(u, nu, 4);
  std::string path =
      cfg.out_dir.empty() ? "flow_charts.csv" : cfg.out_dir + "/flow_charts.csv";
  if (!cfg.out_dir.empty()) ensure_dir(cfg.out_dir);
  CsvWriter csv(path, {"chart", "t", "det_err", "invgrad_dev", "cond"});
  SliceFFT fft(g);
  double worst_det = 0;
  for (const auto& chart : atlas.charts) {
    for (int k = chart.k_lo; k <= chart.k_hi; ++k) {
      InvGradSlice ig = invgrad_slice(chart, g, fft, k);
      csv.row({std::to_string(chart.i), CsvWriter::num(g.time(k)),
               CsvWriter::num(ig.max_det_err), CsvWriter::num(ig.max_dev),
               CsvWriter::num(ig.max_cond)});
      worst_det = std::max(worst_det, ig.max_det_err);
    }
  }
  std::cout << "chart diagnostics written to " << path
            << " (max |det-1| = " << worst_det << ")\n";
  return worst_det <= 1e-5 * cfg.tol_scale ? 0 : 1;
}

int run_step_cmd(const RunConfig& cfg) {
  Grid g(cfg.d, cfg.nx, cfg.nt);
  Triple T = (cfg.u_shear != 0)
                 ? manufactured_triple(g, cfg.rho_amp, cfg.u_shear, cfg.seed)
                 : initial_triple(ramp_bump_density(g, cfg.rho_amp, cfg.seed));
  ParameterSet ps = plan_step_params(cfg, g, cfg.mu);
  if (cfg.delta > 0) ps.delta = cfg.delta;
  StepRecord rec = run_step(T, ps, cfg);
  Json j = step_record_json(rec);
  std::cout << j.dump(2) << "\n";
  if (!cfg.out_dir.empty()) {
    ensure_dir(cfg.out_dir);
    write_json(j, cfg.out_dir + "/step.json");
  }
  bool cde_ok = rec.cde_out.residual_l1 <=
                cfg.tol_scale * std::max(0.01 * rec.cde_out.div_r_l1,
                                         2.0 * rec.cde_out.floor_l1);
  bool prop_ok = rec.prop31.ok(rec.prop31.measured_M * (1 + 1e-9));
  return (cde_ok && prop_ok) ? 0 : 1;
}

int run_iterate(const RunConfig& cfg) {
  TrajectoryReport rep = run_iteration(cfg);
  Json j = trajectory_json(rep);
  std::cout << j.dump(2) << "\n";
  if (!cfg.out_dir.empty()) {
    ensure_dir(cfg.out_dir);
    write_json(j, cfg.out_dir + "/trajectory.json");
    write_trajectory_csv(rep, cfg.out_dir + "/norms.csv");
  }
  for (const auto& st : rep.steps) {
    if (st.cde_out.residual_l1 >
        cfg.tol_scale *
            std::max(0.01 * st.cde_out.div_r_l1, 2.0 * st.cde_out.floor_l1))
      return 1;
  }
  return 0;
}

int run_demo(const RunConfig& cfg) {
  NonuniquenessReport rep = nonuniqueness_scenario(cfg);
  Json j = nonuniqueness_json(rep);
  std::cout << j.dump(2) << "\n";
  if (!cfg.out_dir.empty()) {
    ensure_dir(cfg.out_dir);
    write_json(j, cfg.out_dir + "/nonuniqueness.json");
  }
  return rep.profile_nonconstant ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex-integration construction lab for the transport equation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, atlas_csv;
  bool dump_fields = false;
  long seed = -1;
  double tol_scale = 0;
  app.add_option("--config", config_path, "config file (key = value lines)");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--dump-fields", dump_fields, "write binary field dumps");
  app.add_option("--seed", seed, "RNG seed override");
  app.add_option("--tol-scale", tol_scale, "scale gate tolerances");

  auto* plan = app.add_subcommand("plan", "exponent feasibility");
  plan->add_option("--atlas", atlas_csv, "sweep indices, write a CSV region");
  std::string s_in, p_in, st_in, pt_in, sbar_in;
  int d_in = 0, mbar_in = -1, k_in = -1;
  plan->add_option("--d", d_in);
  plan->add_option("--s", s_in);
  plan->add_option("--p", p_in);
  plan->add_option("--st", st_in);
  plan->add_option("--pt", pt_in);
  plan->add_option("--sbar", sbar_in);
  plan->add_option("--mbar", mbar_in);
  plan->add_option("--k", k_in);

  auto* blocks = app.add_subcommand("blocks", "building-block scaling report");
  auto* flow = app.add_subcommand("flow", "flow-chart diagnostics");
  auto* step = app.add_subcommand("step", "one perturbation step");
  auto* iterate = app.add_subcommand("iterate", "iterated steps");
  auto* demo = app.add_subcommand("demo", "non-uniqueness scenario");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_cfg(config_path, out_dir, dump_fields, seed, tol_scale);
    if (plan->parsed()) {
      if (d_in > 0) cfg.d = d_in;
      if (!s_in.empty()) cfg.s = s_in;
      if (!p_in.empty()) cfg.p = p_in;
      if (!st_in.empty()) cfg.st = st_in;
      if (!pt_in.empty()) cfg.pt = pt_in;
      if (!sbar_in.empty()) {
        cfg.sbar = sbar_in;
        cfg.has_diffusion = true;
      }
      if (mbar_in >= 0) {
        cfg.mbar = mbar_in;
        cfg.has_diffusion = true;
      }
      if (k_in >= 0) {
        cfg.k_order = k_in;
        cfg.has_diffusion = true;
      }
      return run_plan(cfg, atlas_csv);
    }
    if (blocks->parsed()) return run_blocks(cfg);
    if (flow->parsed()) return run_flow(cfg);
    if (step->parsed()) return run_step_cmd(cfg);
    if (iterate->parsed()) return run_iterate(cfg);
    if (demo->parsed()) return run_demo(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
