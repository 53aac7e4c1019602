#include "cbflab/registry.hpp"

#include <cmath>

namespace cbflab::registry {

namespace {

PlanarLTISystem closed_loop_direct(const Matrix2d& atilde) {
  PlanarLTISystem sys;
  sys.A = atilde;
  sys.B = MatrixXd::Identity(2, 2);
  sys.K = MatrixXd::Zero(2, 2);
  return sys;
}

std::vector<Experiment> build() {
  std::vector<Experiment> out;

  {
    Experiment e;
    e.name = "fig1a";
    PlanarLTISystem sys;
    sys.A << 4.0, 2.0, 1.0, 1.0;
    sys.B = MatrixXd(2, 1);
    sys.B << 3.0, 1.0;
    sys.K = MatrixXd(1, 2);
    sys.K << 3.0, -2.0;
    e.scenario = {sys, Obstacle::circle({3.0, 2.0}, 1.0), FilterConfig{10.0}};
    e.expected = {{{2.0, 2.0}, EquilibriumKind::Saddle}};
    e.tolerance = 1e-9;
    out.push_back(e);
  }

  {
    Experiment e;
    e.name = "fig1b";
    Matrix2d atilde;
    atilde << -5.0, 0.0, 0.0, -1.0;
    e.scenario = {closed_loop_direct(atilde), Obstacle::circle({2.0, 0.0}, 1.0), FilterConfig{10.0}};
    e.expected = {{{3.0, 0.0}, EquilibriumKind::Saddle}};
    e.tolerance = 1e-9;
    out.push_back(e);
  }

  {
    Experiment e;
    e.name = "fig1c";
    Matrix2d atilde;
    atilde << -3.0, 4.0 * std::sqrt(2.0), 0.0, -1.0;
    e.scenario = {closed_loop_direct(atilde), Obstacle::circle({2.0, 0.0}, 1.0), FilterConfig{10.0}};
    e.expected = {{{5.0 / 3.0, 2.0 * std::sqrt(2.0) / 3.0}, EquilibriumKind::Degenerate},
                  {{3.0, 0.0}, EquilibriumKind::Saddle}};
    e.tolerance = 1e-8;
    out.push_back(e);
  }

  {
    Experiment e;
    e.name = "fig1d";
    Matrix2d atilde;
    atilde << -1.0, 0.0, 0.0, -5.0;
    e.scenario = {closed_loop_direct(atilde), Obstacle::circle({2.0, 0.0}, 1.0), FilterConfig{10.0}};
    e.expected = {{{2.5, -std::sqrt(3.0) / 2.0}, EquilibriumKind::Saddle},
                  {{2.5, std::sqrt(3.0) / 2.0}, EquilibriumKind::Saddle},
                  {{3.0, 0.0}, EquilibriumKind::AsymptoticallyStable}};
    e.tolerance = 1e-9;
    out.push_back(e);
  }

  return out;
}

}  // namespace

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> all = build();
  return all;
}

std::optional<Experiment> find_experiment(const std::string& name) {
  for (const auto& e : experiments())
    if (e.name == name) return e;
  return std::nullopt;
}

}  // namespace cbflab::registry
