#pragma once

#include <random>
#include <vector>

#include "cbflab/model.hpp"

namespace cbflab::oracle {

/// Brute-force boundary search, kept deliberately independent of the
/// analytic branches: it re-derives everything from the filtered field.
struct BoundaryScan {
  int samples = 0;  // angular resolution of the accepted pass
  struct Zero {
    double angle = 0.0;
    Vector2d location = Vector2d::Zero();
    double residual = 0.0;  // |F| after refinement
    double delta = 0.0;
  };
  std::vector<Zero> zeros;  // sorted by angle; any indicator sign is reported
};

/// Locates every zero of the filtered field on the boundary h = 0 by sign
/// changes of the tangential field component along an angular grid, with
/// tangency minima probed separately. The resolution doubles until the
/// zero count agrees across two consecutive passes.
BoundaryScan boundary_equilibrium_scan(const Scenario& scenario, int n_samples);

/// Reference solution of the pointwise QP
///   min |theta|^2_G  s.t.  grad_h^T (Atilde x + B theta) + alpha0 h >= 0
/// through the bordered KKT system, solved by dense Gaussian elimination
/// (no shared code with the closed-form filter).
VectorXd qp_reference_solver(const Scenario& scenario, const Vector2d& x);

/// One-sided difference quotients of the filtered field at a boundary
/// point, stepping toward the constraint-active side.
Matrix2d finite_difference_jacobian(const Scenario& scenario, const Vector2d& p, double step);

}  // namespace cbflab::oracle

namespace cbflab::corpus {

/// Seeded scenario generators for the verification suites. Rejection
/// sampling keeps every output inside the hypotheses the analytic claims
/// need (safe origin, Hurwitz closed loop, single-input feasibility).
enum class SpectrumShape { RealDistinct, Complex, Any };

ScenarioData random_underactuated(std::mt19937_64& rng);
ScenarioData random_fully_actuated(std::mt19937_64& rng, SpectrumShape shape,
                                   bool eigenvector_center);
ScenarioData random_ellipse(std::mt19937_64& rng, int input_dim);

}  // namespace cbflab::corpus
