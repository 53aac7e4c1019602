#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbflab/assumptions.hpp"
#include "cbflab/equilibria.hpp"
#include "cbflab/filter.hpp"
#include "cbflab/io.hpp"
#include "cbflab/oracle.hpp"
#include "cbflab/portrait.hpp"
#include "cbflab/reduction.hpp"
#include "cbflab/registry.hpp"
#include "cbflab/simulate.hpp"
#include "cbflab/verify.hpp"

namespace {

using cbflab::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMismatch = 2;

struct CommonOpts {
  std::string scenario_path;
  std::string out_dir;
  double alpha0 = 0.0;  // 0: keep the file's value
  double dt = 1e-3;
  double t_max = 100.0;
  int n = 1000;
  unsigned seed = 0;
  double tol = 0.0;
};

cbflab::ScenarioData load_data(const CommonOpts& opts) {
  cbflab::ScenarioData data = cbflab::load_scenario_file(opts.scenario_path);
  if (opts.alpha0 > 0.0) data.config.alpha0 = opts.alpha0;
  return data;
}

cbflab::Scenario load_scenario(const CommonOpts& opts) {
  return cbflab::validate_scenario(load_data(opts));
}

cbflab::IntegratorConfig integrator_config(const CommonOpts& opts) {
  cbflab::IntegratorConfig cfg;
  cfg.dt = opts.dt;
  cfg.t_max = opts.t_max;
  return cfg;
}

std::vector<cbflab::Vector2d> report_locations(const std::vector<cbflab::EquilibriumReport>& reps) {
  std::vector<cbflab::Vector2d> out;
  for (const auto& r : reps) out.push_back(r.location);
  return out;
}

json equilibria_json(const cbflab::EquilibriaResult& result) {
  json reports = json::array();
  for (const auto& rep : result.reports) reports.push_back(cbflab::report_to_json(rep));
  return json{{"equilibria", reports}, {"diagnosis", cbflab::diagnosis_to_json(result.diagnosis)}};
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw cbflab::Error(cbflab::ErrorCode::IoError, "cannot create directory: " + dir);
}

int cmd_check(const CommonOpts& opts) {
  cbflab::ScenarioData data = load_data(opts);
  if (opts.tol > 0.0)
    std::cerr << "warning: strict assumption inequalities relaxed by tol=" << opts.tol << "\n";
  cbflab::AssumptionReport report = cbflab::check_assumptions(data, opts.tol);
  std::cout << cbflab::assumption_report_to_json(report).dump(2) << "\n";
  return kExitOk;
}

int cmd_equilibria(const CommonOpts& opts) {
  cbflab::Scenario sc = load_scenario(opts);
  std::cout << equilibria_json(cbflab::analyze_equilibria(sc)).dump(2) << "\n";
  return kExitOk;
}

int cmd_classify(const CommonOpts& opts, double x1, double x2) {
  cbflab::Scenario sc = load_scenario(opts);
  const cbflab::Vector2d p(x1, x2);
  const double delta = cbflab::indicator(sc, p);
  const cbflab::EquilibriumKind kind = cbflab::classify(sc, p, delta);
  const cbflab::Matrix2d jac = cbflab::jacobian_at_boundary(sc, p);
  const cbflab::EigenPair2 e = cbflab::eigen2(jac);
  json j;
  j["location"] = cbflab::vec_json(p);
  j["indicator"] = cbflab::num(delta);
  j["jacobian"] = cbflab::mat_json(jac);
  j["eigenvalues"] = json::array(
      {json::array({cbflab::num(e.lambda1.real()), cbflab::num(e.lambda1.imag())}),
       json::array({cbflab::num(e.lambda2.real()), cbflab::num(e.lambda2.imag())})});
  j["kind"] = cbflab::equilibrium_kind_name(kind);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_simulate(const CommonOpts& opts, double x1, double x2) {
  cbflab::Scenario sc = load_scenario(opts);
  const auto result = cbflab::analyze_equilibria(sc);
  cbflab::Trajectory traj =
      cbflab::integrate(sc, {x1, x2}, integrator_config(opts), report_locations(result.reports));
  const std::string csv = cbflab::trajectory_csv(traj);
  if (!opts.out_dir.empty()) {
    ensure_out_dir(opts.out_dir);
    cbflab::write_file(opts.out_dir + "/trajectory.csv", csv);
    json j;
    j["verdict"] = cbflab::verdict_to_json(traj.verdict);
    j["min_h"] = cbflab::num(traj.min_h);
    j["samples"] = traj.samples.size();
    j["files"] = json::array({opts.out_dir + "/trajectory.csv"});
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << csv;
  }
  return kExitOk;
}

int cmd_manifold(const CommonOpts& opts) {
  cbflab::Scenario sc = load_scenario(opts);
  const auto result = cbflab::analyze_equilibria(sc);
  json traces = json::array();
  int idx = 0;
  for (const auto& rep : result.reports) {
    if (rep.kind != cbflab::EquilibriumKind::Saddle) continue;
    cbflab::ManifoldTrace trace =
        cbflab::trace_stable_manifold(sc, rep, 0.0, integrator_config(opts));
    json t;
    t["seed_equilibrium"] = cbflab::vec_json(trace.seed_equilibrium);
    t["stable_eigvec"] = cbflab::vec_json(trace.stable_eigvec);
    t["mu_stable"] = cbflab::num(trace.mu_stable);
    if (!opts.out_dir.empty()) {
      ensure_out_dir(opts.out_dir);
      json files = json::array();
      for (int b = 0; b < 2; ++b) {
        const std::string path =
            opts.out_dir + "/manifold_" + std::to_string(idx) + "_" + std::to_string(b) + ".csv";
        cbflab::write_file(path, cbflab::trajectory_csv(trace.branches[b]));
        files.push_back(path);
      }
      t["files"] = files;
    }
    traces.push_back(t);
    ++idx;
  }
  std::cout << json{{"manifolds", traces}}.dump(2) << "\n";
  return kExitOk;
}

int cmd_basin(const CommonOpts& opts) {
  cbflab::Scenario sc = load_scenario(opts);
  const auto result = cbflab::analyze_equilibria(sc);
  cbflab::BasinStatistics stats = cbflab::basin_sample(sc, opts.n, integrator_config(opts),
                                                       opts.seed, report_locations(result.reports));
  json j = cbflab::basin_to_json(stats);
  json eq = json::array();
  for (const auto& rep : result.reports) eq.push_back(cbflab::vec_json(rep.location));
  j["equilibria"] = eq;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_portrait(const CommonOpts& opts) {
  cbflab::Scenario sc = load_scenario(opts);
  cbflab::PortraitSpec spec = cbflab::default_portrait_spec(sc);
  spec.integrator = integrator_config(opts);
  cbflab::PortraitResult result = cbflab::render_portrait(sc, spec);
  ensure_out_dir(opts.out_dir);
  cbflab::write_file(opts.out_dir + "/field.csv", result.field_csv);
  cbflab::write_file(opts.out_dir + "/portrait.svg", result.svg);
  json eq = json::array();
  for (const auto& rep : result.reports) eq.push_back(cbflab::report_to_json(rep));
  cbflab::write_file(opts.out_dir + "/equilibria.json", json(eq).dump(2) + "\n");
  json j;
  j["files"] = json::array({opts.out_dir + "/field.csv", opts.out_dir + "/portrait.svg",
                            opts.out_dir + "/equilibria.json"});
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_reduce(const CommonOpts& opts) {
  cbflab::Scenario sc = load_scenario(opts);
  cbflab::ReducedScenario red = cbflab::reduce(sc);
  json j;
  j["E"] = cbflab::mat_json(red.e);
  j["scenario"] = cbflab::scenario_to_json(red.fixed_rule.data());
  j["transported_weighting"] = cbflab::mat_json(red.transported.weighting());
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const CommonOpts& opts) {
  cbflab::verify::SuiteOptions suite;
  suite.seed = opts.seed;
  suite.n_states = opts.n * 10;
  suite.n_scenarios = std::max(10, opts.n / 10);
  suite.n_ellipses = std::max(5, opts.n / 40);
  json checks = json::array();
  bool all_pass = true;
  for (const auto& r : cbflab::verify::run_all(suite)) {
    checks.push_back({{"name", r.name},
                      {"pass", r.pass},
                      {"count", r.count},
                      {"failures", r.failures},
                      {"worst", cbflab::num(r.worst)}});
    all_pass = all_pass && r.pass;
  }
  std::cout << json{{"pass", all_pass}, {"checks", checks}}.dump(2) << "\n";
  return all_pass ? kExitOk : kExitMismatch;
}

int cmd_repro(const std::string& name, const CommonOpts& opts) {
  auto exp = cbflab::registry::find_experiment(name);
  if (!exp) {
    std::cerr << "unknown experiment: " << name << " (expected fig1a..fig1d)\n";
    return kExitUsage;
  }
  cbflab::Scenario sc = cbflab::validate_scenario(exp->scenario);
  cbflab::EquilibriaResult result = cbflab::analyze_equilibria(sc);

  bool match = result.reports.size() == exp->expected.size();
  json found = json::array();
  for (const auto& rep : result.reports) found.push_back(cbflab::report_to_json(rep));
  json expected = json::array();
  for (size_t i = 0; i < exp->expected.size(); ++i) {
    const auto& want = exp->expected[i];
    expected.push_back({{"location", cbflab::vec_json(want.location)},
                        {"kind", cbflab::equilibrium_kind_name(want.kind)}});
    if (!match) continue;
    const auto& got = result.reports[i];
    if ((got.location - want.location).norm() > exp->tolerance || got.kind != want.kind)
      match = false;
  }

  if (!opts.out_dir.empty()) {
    cbflab::PortraitSpec spec = cbflab::default_portrait_spec(sc);
    cbflab::PortraitResult portrait = cbflab::render_portrait(sc, spec);
    ensure_out_dir(opts.out_dir);
    cbflab::write_file(opts.out_dir + "/field.csv", portrait.field_csv);
    cbflab::write_file(opts.out_dir + "/portrait.svg", portrait.svg);
  }

  json j;
  j["experiment"] = name;
  j["pass"] = match;
  j["tolerance"] = cbflab::num(exp->tolerance);
  j["found"] = found;
  j["expected"] = expected;
  std::cout << j.dump(2) << "\n";
  return match ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop analysis of CBF safety filters for planar linear systems"};
  app.require_subcommand(1);

  CommonOpts opts;
  double x1 = 0.0, x2 = 0.0;
  std::string experiment;

  auto add_common = [&](CLI::App* sub, bool needs_scenario) {
    auto* sopt = sub->add_option("--scenario", opts.scenario_path, "scenario JSON file");
    if (needs_scenario) sopt->required();
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--alpha0", opts.alpha0, "override the scenario's class-K slope");
    sub->add_option("--dt", opts.dt, "integrator step");
    sub->add_option("--tmax", opts.t_max, "integration horizon");
    sub->add_option("--n", opts.n, "sample count");
    sub->add_option("--seed", opts.seed, "seed for randomized subcommands");
    sub->add_option("--tol", opts.tol, "relax strict assumption inequalities");
  };

  auto* check = app.add_subcommand("check", "print the assumption report");
  add_common(check, true);
  auto* equilibria = app.add_subcommand("equilibria", "enumerate and classify equilibria");
  add_common(equilibria, true);
  auto* classify = app.add_subcommand("classify", "classify a boundary point");
  add_common(classify, true);
  classify->add_option("x1", x1, "first coordinate")->required();
  classify->add_option("x2", x2, "second coordinate")->required();
  auto* simulate = app.add_subcommand("simulate", "integrate a trajectory (CSV)");
  add_common(simulate, true);
  simulate->add_option("x1", x1, "first coordinate")->required();
  simulate->add_option("x2", x2, "second coordinate")->required();
  auto* manifold = app.add_subcommand("manifold", "trace stable manifolds of saddles");
  add_common(manifold, true);
  auto* basin = app.add_subcommand("basin", "sample convergence basins");
  add_common(basin, true);
  auto* portrait = app.add_subcommand("portrait", "render the phase portrait");
  add_common(portrait, true);
  portrait->get_option("--out")->required();
  auto* reduce = app.add_subcommand("reduce", "emit the circular-obstacle equivalent");
  add_common(reduce, true);
  auto* verify = app.add_subcommand("verify", "run the oracle cross-check suite");
  add_common(verify, false);
  auto* repro = app.add_subcommand("repro", "reproduce a built-in experiment");
  repro->add_option("experiment", experiment, "fig1a, fig1b, fig1c, or fig1d")->required();
  add_common(repro, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(opts);
    if (equilibria->parsed()) return cmd_equilibria(opts);
    if (classify->parsed()) return cmd_classify(opts, x1, x2);
    if (simulate->parsed()) return cmd_simulate(opts, x1, x2);
    if (manifold->parsed()) return cmd_manifold(opts);
    if (basin->parsed()) return cmd_basin(opts);
    if (portrait->parsed()) return cmd_portrait(opts);
    if (reduce->parsed()) return cmd_reduce(opts);
    if (verify->parsed()) return cmd_verify(opts);
    if (repro->parsed()) return cmd_repro(experiment, opts);
  } catch (const cbflab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
