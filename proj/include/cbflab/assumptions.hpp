#pragma once

#include <optional>

#include "cbflab/model.hpp"

namespace cbflab {

/// Witnesses of the single-input feasibility test. With
///   beta  = a11 b2 - b1 a21,  gamma = a22 b1 - b2 a12,
///   t3    = beta xc1 - gamma xc2,
///   t1    = b2 beta + b1 gamma + alpha0 (b1^2 + b2^2) / 2,
///   t2    = (beta xc1 - gamma xc2)^2 + 2 alpha0 r^2 t1,
/// the sufficient condition is
///   r > 0, b1^2 + b2^2 > 0, t1 > 0, r / sqrt(b1^2+b2^2) > (|t3| + sqrt(t2)) / (2 t1).
struct FeasibilityWitness {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  bool holds = false;
};

struct DerivedConditionsReport {
  bool gamma_beta_positive = false;   // gamma^2 + beta^2 > 0
  bool discriminant_positive = false; // r^2 (gamma^2 + beta^2) - t3^2 > 0
  bool gxc_nonzero = false;           // gamma xc1 + beta xc2 != 0
  bool all() const { return gamma_beta_positive && discriminant_positive && gxc_nonzero; }
};

/// Per-scenario report of every hypothesis the analysis relies on.
/// The feasibility entry is a *sufficient-condition* check for m = 1
/// (a false value does not prove infeasibility); for invertible B it is
/// trivially true. The single-input witnesses are absent for m = 2.
struct AssumptionReport {
  bool origin_interior = false;
  bool stabilizable = false;
  bool feasibility = false;
  bool fully_actuated = false;
  std::optional<FeasibilityWitness> witness;
  std::optional<DerivedConditionsReport> derived_conditions;
  bool all_hold() const {
    return origin_interior && stabilizable && feasibility &&
           (fully_actuated || !derived_conditions || derived_conditions->all());
  }
};

/// Origin strictly inside the safe set: |xc|^2 > r^2 for a circle,
/// xc^T P xc > 1 for an ellipse. Strict by default; a positive tol
/// relaxes the comparison to > -tol for near-boundary data.
bool check_origin_interior(const Obstacle& obstacle, double tol = 0.0);

/// Invariants of the pair (beta, gamma): computed from the closed loop,
/// but identical for A and A - B K by construction.
double underactuated_beta(const Matrix2d& a, const Vector2d& b);
double underactuated_gamma(const Matrix2d& a, const Vector2d& b);

/// Single-input feasibility sufficient condition. Requires m = 1 and a
/// circular obstacle (callers reduce ellipses first). Throws WrongActuation.
FeasibilityWitness check_feasibility_underactuated(const ScenarioData& data, double tol = 0.0);

/// The three derived positivity conditions for the single-input case.
/// Requires m = 1 and a circular obstacle. Throws WrongActuation.
DerivedConditionsReport check_derived_conditions(const ScenarioData& data, double tol = 0.0);

/// Full report on raw (possibly not yet validated) scenario data.
/// Ellipsoidal single-input scenarios are checked on their reduced
/// circular equivalent.
AssumptionReport check_assumptions(const ScenarioData& data, double tol = 0.0);

}  // namespace cbflab
