#include "cbflab/filter.hpp"

#include <cmath>

namespace cbflab {

namespace {
constexpr double kGradientTol = 1e-12;  // |B^T grad_h| below this is degenerate
constexpr double kBoundaryTol = 1e-9;   // |h(p)| tolerance for boundary formulas
}  // namespace

double eta(const Scenario& scenario, const Vector2d& x) {
  const Obstacle& obs = scenario.obstacle();
  return obs.grad_h(x).dot(scenario.atilde() * x) + scenario.alpha0() * obs.h(x);
}

Vector2d closed_loop_field(const Scenario& scenario, const Vector2d& x) {
  const Obstacle& obs = scenario.obstacle();
  const Vector2d w = obs.grad_h(x);
  const Vector2d ax = scenario.atilde() * x;
  const double e = w.dot(ax) + scenario.alpha0() * obs.h(x);
  if (e >= 0.0) return ax;
  const double s = w.dot(scenario.dmat() * w);
  if (w.dot(scenario.bbt() * w) < kGradientTol * kGradientTol)
    throw Error(ErrorCode::DegenerateGradient, "B^T grad_h vanishes where the constraint is active");
  return ax - (e / s) * (scenario.dmat() * w);
}

FilterEvaluation safety_filter(const Scenario& scenario, const Vector2d& x) {
  const Obstacle& obs = scenario.obstacle();
  FilterEvaluation out;
  const Vector2d w = obs.grad_h(x);
  const Vector2d ax = scenario.atilde() * x;
  out.eta = w.dot(ax) + scenario.alpha0() * obs.h(x);
  out.v = VectorXd::Zero(scenario.input_dim());
  if (out.eta >= 0.0) {
    out.F = ax;
    return out;
  }
  const VectorXd btw = scenario.system().B.transpose() * w;
  if (btw.norm() < kGradientTol)
    throw Error(ErrorCode::DegenerateGradient, "B^T grad_h vanishes where the constraint is active");
  const double s = w.dot(scenario.dmat() * w);  // = |B^T w|^2 in the G^-1 metric
  out.v = -(out.eta / s) * (scenario.weighting_inv() * btw);
  out.F = ax + scenario.system().B * out.v;
  return out;
}

double indicator(const Scenario& scenario, const Vector2d& p) {
  const Obstacle& obs = scenario.obstacle();
  const Vector2d w = obs.grad_h(p);
  if ((scenario.system().B.transpose() * w).norm() < kGradientTol)
    throw Error(ErrorCode::DegenerateGradient, "B^T grad_h vanishes at the query point");
  const double s = w.dot(scenario.dmat() * w);
  return w.dot(scenario.atilde() * p) / s;
}

Matrix2d jacobian_at_boundary(const Scenario& scenario, const Vector2d& p) {
  const Obstacle& obs = scenario.obstacle();
  if (std::abs(obs.h(p)) > kBoundaryTol)
    throw Error(ErrorCode::PreconditionViolated, "jacobian_at_boundary requires h(p) = 0 within 1e-9");
  const Vector2d w = obs.grad_h(p);
  if ((scenario.system().B.transpose() * w).norm() < kGradientTol)
    throw Error(ErrorCode::DegenerateGradient, "B^T grad_h vanishes at the boundary point");
  const Matrix2d& d = scenario.dmat();
  const Matrix2d& at = scenario.atilde();
  const Matrix2d hess = obs.hess_h();
  const Vector2d f = at * p;
  const double s = w.dot(d * w);
  const Matrix2d rank1 = (d * w) * w.transpose() / s;
  const Matrix2d bracket = hess * w.dot(f) - w * (f.transpose() * hess);
  return at - rank1 * (at + scenario.alpha0() * Matrix2d::Identity()) - (d / s) * bracket;
}

double equilibrium_residual(const Scenario& scenario, const Vector2d& p, double delta) {
  const Vector2d w = scenario.obstacle().grad_h(p);
  return (scenario.atilde() * p - delta * (scenario.dmat() * w)).norm();
}

}  // namespace cbflab
