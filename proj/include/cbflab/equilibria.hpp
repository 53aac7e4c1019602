#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "cbflab/model.hpp"

namespace cbflab {

enum class EquilibriumKind { Saddle, AsymptoticallyStable, Degenerate, Unstable };
const char* equilibrium_kind_name(EquilibriumKind kind);

/// Which analytic branch produced a report.
struct Provenance {
  enum class Path { UnderactuatedClosedForm, EigenvectorTableRow, GeneralDeltaRoot, BruteForce };
  Path path = Path::GeneralDeltaRoot;
  int table_row = 0;  // 1..3 when path == EigenvectorTableRow and a table row applies
};
const char* provenance_path_name(Provenance::Path path);

/// A certified undesirable equilibrium: a boundary point p with
/// Atilde p = delta D grad_h(p) and delta < 0, together with the analytic
/// Jacobian of the filtered field, its eigenvalues, and a stability label.
struct EquilibriumReport {
  Vector2d location = Vector2d::Zero();
  double indicator = 0.0;  // delta < 0
  Matrix2d jacobian = Matrix2d::Zero();
  std::complex<double> eigenvalues[2];
  EquilibriumKind kind = EquilibriumKind::Saddle;
  Provenance provenance;
};

/// A boundary point solving the equilibrium condition for some real delta
/// of either sign; members with delta > 0 are not equilibria of the
/// filtered system (the filter is inactive there).
struct PotentialEquilibrium {
  Vector2d location = Vector2d::Zero();
  double indicator = 0.0;
};

enum class ConditionTag { Condition1, Condition2, Neither };
const char* condition_tag_name(ConditionTag tag);

struct CaseDiagnosis {
  enum class Actuation { Underactuated, FullyActuated };
  Actuation actuation = Actuation::Underactuated;
  bool xc_eigenvector = false;
  std::optional<int> table_row;              // 1..3; only in the eigenvector case
  std::optional<ConditionTag> condition12;   // only in the eigenvector case
  std::vector<double> delta_roots;           // indicator of every potential equilibrium
  std::vector<PotentialEquilibrium> potential;  // the full candidate set (any delta sign)
  bool outside_paper_tables = false;  // complex spectrum or ellipsoidal full actuation
  bool dual_path_checked = false;     // near-eigenvector input routed through both branches
  bool dual_path_agree = true;
};

struct EquilibriaResult {
  std::vector<EquilibriumReport> reports;  // sorted lexicographically by location
  CaseDiagnosis diagnosis;
};

/// Stability label from the eigenvalues of the analytic Jacobian at
/// `location`. Degeneracy tolerance: 1e-7 * |Atilde|_F on real parts.
/// Requires the equilibrium condition residual at (location, delta) to be
/// small; throws PreconditionViolated otherwise.
EquilibriumKind classify(const Scenario& scenario, const Vector2d& location, double delta);

/// Single-input branch: the unique undesirable equilibrium
///   p_{+/-} = (gamma z, beta z),
///   z_{+/-} = (gamma xc1 + beta xc2 +/- sqrt(r^2 (gamma^2+beta^2) - t3^2)) / (gamma^2+beta^2),
/// choosing p_+ when gamma xc1 + beta xc2 < 0 and p_- when it is positive.
/// Ellipsoidal obstacles are reduced to the circular equivalent first.
/// Throws WrongActuation (m != 1) and AssumptionViolated (upstream checks fail).
EquilibriumReport underactuated_equilibrium(const Scenario& scenario);

/// Invertible-B branch for a circular obstacle whose center is an
/// eigenvector of Atilde (sine of the angle below 1e-9). Enumerates the
/// two on-axis candidates and the singular-indicator chord intersections,
/// classifies each, and records the table row / tangency condition.
/// Throws NotEigenvector, ComplexSpectrum, WrongActuation.
EquilibriaResult eigenvector_case(const Scenario& scenario);

/// Invertible-B branch for a general center: all real roots of the
/// quartic boundary-constraint polynomial in the indicator delta, each
/// expanded to a boundary point through the resolvent
///   p(delta) = xc - (Atilde - 2 delta I)^-1 Atilde xc,
/// with roots at the resolvent singularities lambda_i / 2 resolved by a
/// consistency test on the singular linear system. Also covers
/// ellipsoidal obstacles through the congruence q = E p, which turns the
/// condition into circle form with matrix E^-1 Atilde E^-1.
/// Throws WrongActuation, RootFindingFailed.
EquilibriaResult general_case(const Scenario& scenario);

/// Dispatcher: picks the branch from the actuation class, obstacle kind,
/// spectrum, and center alignment. Near-threshold alignment (sine in
/// [1e-9, 1e-6)) is routed through both fully-actuated branches and the
/// agreement recorded in the diagnosis.
EquilibriaResult analyze_equilibria(const Scenario& scenario);

/// Sufficient-condition report for invertible B, real spectrum
/// lambda1 < lambda2, center not an eigenvector. Decomposes
/// xc = beta1 v1 + beta2 v2 (unit eigenvectors, v1^T v2 >= 0), builds the
/// boundary-constraint quartic F1 from the eigen-data, and evaluates:
///   i)  beta1^2 + beta1 beta2 v1^T v2 >= 0  => every equilibrium with
///       delta < lambda1/2 is a saddle;
///   ii) beta1 beta2 v1^T v2 + beta2^2 >= 0  => every equilibrium with
///       lambda2/2 < delta < 0 is asymptotically stable;
///   iii) dF1/ddelta has a single real root (negative cubic discriminant)
///       and i) holds => exactly one undesirable equilibrium, a saddle.
struct SufficientConditionReport {
  bool sign_condition_i = false;
  bool sign_condition_ii = false;
  double cubic_discriminant = 0.0;
  bool single_real_critical_point = false;
  bool claim_i_applies = false;
  bool claim_ii_applies = false;
  bool claim_iii_applies = false;
  bool claim_i_consistent = true;
  bool claim_ii_consistent = true;
  bool claim_iii_consistent = true;
  double max_f1_residual = 0.0;  // |F1(delta)| / scale over the found roots
};
SufficientConditionReport sufficient_conditions(const Scenario& scenario);

namespace detail {

/// Circle-form enumeration: all p with |p - center| = radius and
/// Meff p = 2 delta (p - center) for some real delta. Pure algebra; Meff
/// need not be Hurwitz.
struct CircleFormResult {
  std::vector<PotentialEquilibrium> points;  // deduplicated, any delta sign
  std::vector<double> quartic_roots;
};
CircleFormResult solve_circle_form(const Matrix2d& meff, const Vector2d& center, double radius);

/// Both single-input candidates (delta of either sign), circle obstacle,
/// without the assumption gate. Used by property tests.
std::vector<PotentialEquilibrium> underactuated_candidates(const Scenario& scenario);

}  // namespace detail

}  // namespace cbflab
