#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cbflab/equilibria.hpp"
#include "cbflab/model.hpp"

namespace cbflab::registry {

/// Golden reproduction data for the four built-in experiments (fig1a-fig1d).
/// fig1b-fig1d specify the closed loop directly (A = Atilde, B = I, K = 0);
/// fig1a is the single-input system under u = -K x.
struct ExpectedEquilibrium {
  Vector2d location;
  EquilibriumKind kind;
};

struct Experiment {
  std::string name;
  ScenarioData scenario;
  std::vector<ExpectedEquilibrium> expected;  // sorted lexicographically by location
  double tolerance = 1e-9;
};

const std::vector<Experiment>& experiments();
std::optional<Experiment> find_experiment(const std::string& name);

}  // namespace cbflab::registry
