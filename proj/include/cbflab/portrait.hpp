#pragma once

#include <string>
#include <vector>

#include "cbflab/equilibria.hpp"
#include "cbflab/model.hpp"
#include "cbflab/simulate.hpp"

namespace cbflab {

struct Window {
  double x_min = -6.0, x_max = 6.0, y_min = -6.0, y_max = 6.0;
};

struct PortraitSpec {
  Window window;
  int grid = 40;  // n x n field samples; >= 10 for registry portraits
  std::vector<Vector2d> trajectories;
  IntegratorConfig integrator;
};

/// Window and grid sized from the scenario geometry.
PortraitSpec default_portrait_spec(const Scenario& scenario);

struct PortraitResult {
  std::string field_csv;  // header x1,x2,F1,F2
  std::string svg;        // deterministic byte-for-byte for fixed inputs
  std::vector<EquilibriumReport> reports;
};

/// Renders the vector field, obstacle, trajectories, equilibrium markers,
/// and the origin. Throws WindowExcludesObstacle when the window misses
/// the obstacle or the origin.
PortraitResult render_portrait(const Scenario& scenario, const PortraitSpec& spec);

}  // namespace cbflab
