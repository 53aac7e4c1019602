#pragma once

#include "cbflab/model.hpp"

namespace cbflab {

/// One evaluation of the safety filter at a state x.
struct FilterEvaluation {
  double eta = 0.0;  // constraint margin grad_h . (Atilde x) + alpha0 h
  VectorXd v;        // minimal-norm correction (m-vector); zero when eta >= 0
  Vector2d F = Vector2d::Zero();  // closed-loop field Atilde x + B v
};

/// Constraint margin eta(x) = grad_h(x)^T Atilde x + alpha0 h(x).
double eta(const Scenario& scenario, const Vector2d& x);

/// Closed-form solution of the pointwise QP:
///   v = 0 when eta >= 0, else -eta G^-1 B^T grad_h / |B^T grad_h|^2_{G^-1}.
/// Throws DegenerateGradient when eta < 0 and B^T grad_h vanishes.
FilterEvaluation safety_filter(const Scenario& scenario, const Vector2d& x);

/// The filtered vector field F(x) = Atilde x + B v(x) without materializing v.
/// Allocation-free; this is the integration hot path.
Vector2d closed_loop_field(const Scenario& scenario, const Vector2d& x);

/// Indicator of a boundary point p:
///   delta = grad_h(p)^T Atilde p / |B^T grad_h(p)|^2_{G^-1}.
/// p is an undesirable equilibrium iff h(p) = 0, Atilde p = delta D grad_h(p),
/// and delta < 0.
double indicator(const Scenario& scenario, const Vector2d& p);

/// Analytic Jacobian of the filtered field at a boundary equilibrium:
///   J = Atilde - D w w^T / (w^T D w) [Atilde + alpha0 I]
///       - D / (w^T D w) [H (w^T f) - w (f^T H)],
/// with w = grad_h(p), H the Hessian of h, f = Atilde p. Requires |h(p)| <= 1e-9.
/// J^T w = -alpha0 w holds identically; only the -alpha0 eigenvalue depends on alpha0.
Matrix2d jacobian_at_boundary(const Scenario& scenario, const Vector2d& p);

/// Residual of the equilibrium condition |Atilde p - delta D grad_h(p)|.
double equilibrium_residual(const Scenario& scenario, const Vector2d& p, double delta);

}  // namespace cbflab
