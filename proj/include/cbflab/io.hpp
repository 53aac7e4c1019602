#pragma once

#include <string>

#include <json.hpp>

#include "cbflab/assumptions.hpp"
#include "cbflab/equilibria.hpp"
#include "cbflab/model.hpp"
#include "cbflab/simulate.hpp"

namespace cbflab {

using nlohmann::json;

/// Rounds to 12 significant digits; all emitted numbers go through this.
double round12(double v);
json num(double v);
json vec_json(const Vector2d& v);
json mat_json(const MatrixXd& m);

/// Scenario files: {"A": 2x2, "B": 2xm, "K": mx2, "obstacle": {...}, "alpha0": f}.
ScenarioData parse_scenario_json(const json& j);
ScenarioData load_scenario_file(const std::string& path);
json scenario_to_json(const ScenarioData& data);

json report_to_json(const EquilibriumReport& report);
json diagnosis_to_json(const CaseDiagnosis& diagnosis);
json assumption_report_to_json(const AssumptionReport& report);
json basin_to_json(const BasinStatistics& stats);
json verdict_to_json(const Verdict& verdict);

std::string trajectory_csv(const Trajectory& trajectory);

void write_file(const std::string& path, const std::string& content);

}  // namespace cbflab
