#pragma once

#include <complex>
#include <vector>

#include "cbflab/equilibria.hpp"
#include "cbflab/model.hpp"
#include "cbflab/registry.hpp"

namespace cbflab::testing {

inline Scenario experiment_scenario(const std::string& name) {
  auto exp = registry::find_experiment(name);
  REQUIRE(exp.has_value());
  return validate_scenario(exp->scenario);
}

inline Scenario circle_scenario_direct(const Matrix2d& atilde, const Vector2d& center,
                                       double radius, double alpha0 = 10.0) {
  PlanarLTISystem sys;
  sys.A = atilde;
  sys.B = MatrixXd::Identity(2, 2);
  sys.K = MatrixXd::Zero(2, 2);
  return validate_scenario(sys, Obstacle::circle(center, radius), FilterConfig{alpha0});
}

inline bool contains_location(const std::vector<EquilibriumReport>& reports, const Vector2d& p,
                              double tol) {
  for (const auto& r : reports)
    if ((r.location - p).norm() <= tol) return true;
  return false;
}

inline std::complex<double> second_eigenvalue(const EquilibriumReport& report, double alpha0) {
  return (std::abs(report.eigenvalues[0].real() + alpha0) >
          std::abs(report.eigenvalues[1].real() + alpha0))
             ? report.eigenvalues[0]
             : report.eigenvalues[1];
}

}  // namespace cbflab::testing
