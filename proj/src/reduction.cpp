#include "cbflab/reduction.hpp"

namespace cbflab {

namespace {

PlanarLTISystem transform_system(const PlanarLTISystem& sys, const Matrix2d& e,
                                 const Matrix2d& einv) {
  PlanarLTISystem hat;
  hat.A = e * sys.A * einv;
  hat.B = e * sys.B;
  hat.K = sys.K * einv;
  return hat;
}

}  // namespace

ScenarioData reduce_data(const ScenarioData& data) {
  if (data.obstacle.is_circle())
    throw Error(ErrorCode::NotEllipse, "reduction applies to ellipsoidal obstacles");
  const Matrix2d& e = data.obstacle.shape_sqrt();
  const Matrix2d& einv = data.obstacle.shape_sqrt_inv();
  ScenarioData hat;
  hat.system = transform_system(data.system, e, einv);
  hat.obstacle = Obstacle::circle(e * data.obstacle.center(), 1.0);
  hat.config = data.config;
  return hat;
}

ReducedScenario reduce(const Scenario& scenario) {
  if (scenario.obstacle().is_circle())
    throw Error(ErrorCode::NotEllipse, "reduction applies to ellipsoidal obstacles");
  ScenarioData hat = reduce_data(scenario.data());
  ReducedScenario out{scenario.obstacle().shape_sqrt(),
                      validate_scenario_with_weighting(hat.system, hat.obstacle, hat.config,
                                                       scenario.weighting()),
                      validate_scenario(hat)};
  return out;
}

EquilibriumReport map_back(const EquilibriumReport& report, const Matrix2d& e) {
  const Matrix2d einv = e.inverse();
  EquilibriumReport out = report;
  out.location = einv * report.location;
  out.jacobian = einv * report.jacobian * e;
  return out;
}

}  // namespace cbflab
