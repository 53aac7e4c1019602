#include "cbflab/assumptions.hpp"

#include <cmath>

#include "cbflab/reduction.hpp"

namespace cbflab {

bool check_origin_interior(const Obstacle& obstacle, double tol) {
  return obstacle.h(Vector2d::Zero()) > -tol;
}

double underactuated_beta(const Matrix2d& a, const Vector2d& b) {
  return a(0, 0) * b.y() - b.x() * a(1, 0);
}

double underactuated_gamma(const Matrix2d& a, const Vector2d& b) {
  return a(1, 1) * b.x() - b.y() * a(0, 1);
}

namespace {

void require_single_input_circle(const ScenarioData& data) {
  if (data.system.input_dim() != 1)
    throw Error(ErrorCode::WrongActuation, "check requires a single-input system");
  if (!data.obstacle.is_circle())
    throw Error(ErrorCode::PreconditionViolated, "check requires a circular obstacle");
}

}  // namespace

FeasibilityWitness check_feasibility_underactuated(const ScenarioData& data, double tol) {
  require_single_input_circle(data);
  const Vector2d b = data.system.B.col(0);
  const Matrix2d atilde = data.system.closed_loop();
  const double beta = underactuated_beta(atilde, b);
  const double gamma = underactuated_gamma(atilde, b);
  const Vector2d xc = data.obstacle.center();
  const double r = data.obstacle.radius();
  const double alpha0 = data.config.alpha0;
  const double bn2 = b.squaredNorm();

  FeasibilityWitness w;
  w.t1 = b.y() * beta + b.x() * gamma + 0.5 * alpha0 * bn2;
  w.t3 = beta * xc.x() - gamma * xc.y();
  w.t2 = w.t3 * w.t3 + 2.0 * alpha0 * r * r * w.t1;
  const bool t1_ok = (tol > 0.0) ? (w.t1 > -tol) : (w.t1 > 0.0);
  const bool radius_ok =
      t1_ok && w.t1 > 0.0 && w.t2 >= 0.0 &&
      (r / std::sqrt(bn2) - (std::abs(w.t3) + std::sqrt(w.t2)) / (2.0 * w.t1) >
       ((tol > 0.0) ? -tol : 0.0));
  w.holds = (r > 0.0) && (bn2 > 0.0) && t1_ok && radius_ok;
  return w;
}

DerivedConditionsReport check_derived_conditions(const ScenarioData& data, double tol) {
  require_single_input_circle(data);
  const Vector2d b = data.system.B.col(0);
  const Matrix2d atilde = data.system.closed_loop();
  const double beta = underactuated_beta(atilde, b);
  const double gamma = underactuated_gamma(atilde, b);
  const Vector2d xc = data.obstacle.center();
  const double r = data.obstacle.radius();
  const double t3 = beta * xc.x() - gamma * xc.y();

  DerivedConditionsReport rep;
  rep.gamma_beta_positive = gamma * gamma + beta * beta > -tol;
  rep.discriminant_positive = r * r * (gamma * gamma + beta * beta) - t3 * t3 > -tol;
  rep.gxc_nonzero = gamma * xc.x() + beta * xc.y() != 0.0;
  if (tol <= 0.0) {
    rep.gamma_beta_positive = gamma * gamma + beta * beta > 0.0;
    rep.discriminant_positive = r * r * (gamma * gamma + beta * beta) - t3 * t3 > 0.0;
  }
  return rep;
}

AssumptionReport check_assumptions(const ScenarioData& data, double tol) {
  AssumptionReport rep;
  rep.origin_interior = check_origin_interior(data.obstacle, tol);
  rep.stabilizable = is_hurwitz2(data.system.closed_loop());
  rep.fully_actuated = (data.system.input_dim() == 2);

  if (rep.fully_actuated) {
    // Invertible B: the constraint gradient B^T grad_h never vanishes on
    // the boundary, so feasibility holds with any linear class-K slope.
    rep.feasibility = true;
    return rep;
  }

  // Single input: evaluate the sufficient condition on the circular
  // equivalent (an ellipsoidal obstacle is reduced first; the reduction
  // leaves the single-input dynamics unchanged).
  ScenarioData circle_data = data.obstacle.is_circle() ? data : reduce_data(data);
  rep.witness = check_feasibility_underactuated(circle_data, tol);
  rep.feasibility = rep.witness->holds;
  rep.derived_conditions = check_derived_conditions(circle_data, tol);
  return rep;
}

}  // namespace cbflab
