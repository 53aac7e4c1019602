#pragma once

#include <array>
#include <vector>

#include "cbflab/equilibria.hpp"
#include "cbflab/model.hpp"

namespace cbflab {

/// Fixed-step RK4 configuration. A fixed step keeps the integrator honest
/// across the constraint-activation surface, where the field is continuous
/// but only piecewise smooth.
struct IntegratorConfig {
  double dt = 1e-3;
  double t_max = 100.0;
  double origin_tol = 1e-6;
  double equilibrium_tol = 1e-6;
  double invariance_tol = 1e-6;
  int sustain_steps = 100;  // consecutive in-tolerance steps before a verdict
  int record_stride = 1;    // sample every k-th step
};

enum class VerdictKind { ConvergedToOrigin, ConvergedToEquilibrium, Undetermined };
const char* verdict_kind_name(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::Undetermined;
  int equilibrium_index = -1;  // into the targets list
};

struct TrajectorySample {
  double t = 0.0;
  Vector2d x = Vector2d::Zero();
  double h = 0.0;
  double eta = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // strictly increasing timestamps
  Verdict verdict;
  double min_h = 0.0;
};

/// Light-weight result for bulk runs that do not need stored samples.
struct RunSummary {
  Verdict verdict;
  double min_h = 0.0;
  Vector2d final_x = Vector2d::Zero();
  double final_t = 0.0;
};

/// RK4 flow of the filtered field from x0 (must satisfy h(x0) >= 0, else
/// UnsafeStart). The verdict fires after `sustain_steps` consecutive steps
/// inside origin_tol of the origin or equilibrium_tol of a target.
Trajectory integrate(const Scenario& scenario, const Vector2d& x0, const IntegratorConfig& config,
                     const std::vector<Vector2d>& targets = {});
RunSummary run_to_verdict(const Scenario& scenario, const Vector2d& x0,
                          const IntegratorConfig& config, const std::vector<Vector2d>& targets = {});

/// Numerical global stable manifold of a saddle: two reversed-time
/// branches seeded at p +/- eps * v_s along the stable eigendirection,
/// integrated until they leave a box of half-width 10 (|xc| + r) around
/// the origin or exhaust t_max.
struct ManifoldTrace {
  Vector2d seed_equilibrium = Vector2d::Zero();
  Vector2d stable_eigvec = Vector2d::Zero();  // unit, eigenvalue mu_stable < 0
  double mu_stable = 0.0;
  std::array<Trajectory, 2> branches;
};
ManifoldTrace trace_stable_manifold(const Scenario& scenario, const EquilibriumReport& report,
                                    double epsilon, const IntegratorConfig& config);

/// Quasi-random (Halton) initial conditions inside the safe set, each run
/// to its verdict. Deterministic for a fixed seed.
struct BasinStatistics {
  int n = 0;
  int to_origin = 0;
  std::vector<int> to_equilibrium;  // per target
  int undetermined = 0;
  double min_h = 0.0;
};
struct SampleBox {
  double x_min = -8.0, x_max = 8.0, y_min = -8.0, y_max = 8.0;
};
SampleBox default_sample_box(const Scenario& scenario);
BasinStatistics basin_sample(const Scenario& scenario, int n_points, const IntegratorConfig& config,
                             unsigned seed, const std::vector<Vector2d>& targets,
                             const SampleBox& box);
BasinStatistics basin_sample(const Scenario& scenario, int n_points, const IntegratorConfig& config,
                             unsigned seed, const std::vector<Vector2d>& targets);

/// Long-horizon runs from a ring of starts around the obstacle and a far
/// ring around the origin; an undetermined trajectory with recurrent,
/// non-contracting tail behavior is flagged as a limit-cycle suspect.
struct ProbeReport {
  int n_runs = 0;
  std::vector<Vector2d> suspect_starts;
  int suspect_count() const { return static_cast<int>(suspect_starts.size()); }
};
ProbeReport limit_cycle_probe(const Scenario& scenario, const IntegratorConfig& config,
                              const std::vector<Vector2d>& targets = {});

/// Base-(2,3) Halton point i mapped into the box.
Vector2d halton_point(unsigned index, const SampleBox& box);

}  // namespace cbflab
