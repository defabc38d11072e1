#pragma once

#include "citl/field.hpp"

namespace citl {

/// Smooth space-time cutoffs chi_j for the defect components: 0 where
/// |R_j| <= delta/(16d) or t outside I_{r/2}, 1 where |R_j| >= delta/(8d)
/// and t inside I_r. Built as S(|R_j^smooth|) * T(t) with the value ramp
/// tightened by the smoothing error, so the plateau conditions hold exactly
/// on the grid.
struct CutoffSet {
  double delta = 0;
  double r = 0;
  double v0 = 0, v1 = 0;  // delta/(16d), delta/(8d)
  std::vector<SpaceTimeField> chi;  // d scalar fields
  std::vector<bool> active;         // false where R_j is identically zero
  std::vector<double> smooth_err;   // per-j sup |R_j - R_j^smooth|
  std::vector<double> band_cells;   // per-j resolved ramp thickness in cells
};

/// r = min(1/8, delta/(32 d ||R||_inf)); factor-2 headroom inside the margin
/// constraint, capped so I_{r/2} stays well inside (0,1). R identically zero
/// gives r = 1/8 (the cutoffs then vanish).
double choose_margin(const SpaceTimeField& R, double delta);

CutoffSet build_cutoffs(const SpaceTimeField& R, double delta, double r);

/// Coefficient fields with a_j b_j = -chi_j^2 R_j and the mixed-norm split
/// carried by the time-weight ratio (||R~_j(t)||_1 / ||R~_j||_1)^{1/s-1/p}.
struct CoefficientFields {
  double s = 2, p = 2;
  std::vector<SpaceTimeField> a, b;  // d scalars each
  std::vector<Vec> time_weight;      // ||R~_j(t)||_{L1} per slice
  std::vector<double> total_weight;  // ||R~_j||_{L1_{t,x}}
  std::vector<bool> active;
};

CoefficientFields build_coefficients(const CutoffSet& cut,
                                     const SpaceTimeField& R, double s,
                                     double p);

/// Max relative slack of the two Lebesgue bounds on a_j(t), b_j(t) over all
/// time samples (<= 0 when the bounds hold).
double coefficient_bound_violation(const CoefficientFields& cf,
                                   const CutoffSet& cut);

}  // namespace citl
