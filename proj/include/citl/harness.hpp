#pragma once

#include "citl/io.hpp"
#include "citl/perturb.hpp"
#include "citl/planner.hpp"
#include "citl/schedule.hpp"

namespace citl {

/// One run's configuration; keys in the config file mirror these fields.
struct RunConfig {
  std::string scenario = "step";  // plan | blocks | flow | step | iterate | demo

  int d = 2, nx = 64, nt = 64;
  std::string s = "2", p = "2", st = "1", pt = "1";
  bool has_diffusion = false;
  std::string sbar = "2";
  int mbar = 1;
  int k_order = 2;

  double mu = 4;
  int n_steps = 1;
  std::vector<double> mu_ladder;  // empty: mu * 2^(n-1)
  double delta = 1.0;
  double eta = 0;   // 0: schedule / default
  double eps = 0;   // 0: theorem formula for the demo scenario
  double nu = 0;    // 0: stiffness-driven choice
  // explicit exponent ladder (outside the planner windows when nonzero)
  double alpha_override = 0, beta_override = 0, gamma_override = 0;

  std::string rho_shape = "ramp_bump";  // ramp_bump | interior_bump
  double rho_amp = 1.0;
  double u_shear = 0.0;  // manufactured desk triple when nonzero
  unsigned seed = 1234;

  std::string out_dir;
  bool dump_fields = false;
  double tol_scale = 1.0;
};

RunConfig parse_config(const std::string& path);

/// A continuity-defect triple.
struct Triple {
  SpaceTimeField rho, u, R;
};

/// (rho~, 0, R(d_t rho~)); rejects rho~ whose spatial mean varies in time.
Triple initial_triple(const SpaceTimeField& rho_tilde);

/// Smooth manufactured triple with a steady shear velocity: rho = q(t)
/// rho_bar(x), u = amp (sin 2pi x2, 0), R = antidiv(d_t rho + div(rho u)).
Triple manufactured_triple(const Grid& g, double rho_amp, double u_amp,
                           unsigned seed);

/// rho~ = chi(t) rho_bar(x) builders.
SpaceTimeField ramp_bump_density(const Grid& g, double amp, unsigned seed);
double nonuniqueness_chi(double t);  // 1 on |t-1/2|<=1/4, 0 beyond 3/8

struct StepRecord {
  StepParams prm;
  int D = 1;
  bool frozen = false;
  double nu = 0;
  double atlas_det_err = 0, atlas_dev = 0, flow_stiff = 0;
  double ajbj_err = 0;   // max |a_j b_j + chi_j^2 R_j|
  double mean_theta_violation = 0;
  double div_w_rel = 0;  // ||div w||_inf / max(1, ||grad w||_inf)
  double r_old_l1 = 0, r_old_linf = 0;
  double r1_l1 = 0;
  std::vector<DefectStats> components;
  std::vector<NormTableRow> table;
  CdeReport cde_out;
  Prop31Report prop31;
  bool accepted = false;  // defect decreased
};

/// One Proposition-3.1 step: consumes the triple, returns the new one.
StepRecord run_step(Triple& T, const ParameterSet& ps, const RunConfig& cfg);

struct TrajectoryReport {
  Schedule schedule;
  double measured_M = 0;       // from the calibration prepass
  double r1_initial_l1 = 0;
  std::vector<StepRecord> steps;
  double final_deviation = 0;  // ||rho - rho~||_{L^s L^p}
  Vec profile_lp;              // t -> ||rho(t)||_p of the final density
};

TrajectoryReport run_iteration(const RunConfig& cfg, Triple* final_triple = nullptr);

struct NonuniquenessReport {
  TrajectoryReport traj;
  double eps_budget = 0;       // (1/4)(T/4)^{1/s}
  double achieved_deviation = 0;
  bool budget_met = false;
  double middle_avg = 0;       // mean of ||rho(t)||_p over [T/4, 3T/4]
  double end_avg = 0;          // mean over [0,T/8] u [7T/8, T]
  double middle_gate = 0.75;   // 3/4 - slack
  double end_gate = 0.5;       // 1/2 + slack
  double slack_mid = 0, slack_end = 0;
  bool profile_nonconstant = false;
  double zero_solution_residual = 0;  // trivially 0: the competitor
};

NonuniquenessReport nonuniqueness_scenario(const RunConfig& cfg);

/// Parameter selection for a config (planner + grid concretization, or the
/// config's explicit exponent ladder).
ParameterSet plan_step_params(const RunConfig& cfg, const Grid& g, double mu);

Json step_record_json(const StepRecord& rec);
Json trajectory_json(const TrajectoryReport& rep);
Json nonuniqueness_json(const NonuniquenessReport& rep);

void write_trajectory_csv(const TrajectoryReport& rep, const std::string& path);

}  // namespace citl
