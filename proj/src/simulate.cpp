#include "cbflab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cbflab/filter.hpp"
#include "cbflab/parallel.hpp"

namespace cbflab {

const char* verdict_kind_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::ConvergedToOrigin: return "ConvergedToOrigin";
    case VerdictKind::ConvergedToEquilibrium: return "ConvergedToEquilibrium";
    case VerdictKind::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

namespace {

Vector2d rk4_step(const Scenario& sc, const Vector2d& x, double dt, double direction) {
  auto f = [&](const Vector2d& y) { return direction * closed_loop_field(sc, y); };
  const Vector2d k1 = f(x);
  const Vector2d k2 = f(x + 0.5 * dt * k1);
  const Vector2d k3 = f(x + 0.5 * dt * k2);
  const Vector2d k4 = f(x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename SampleFn>
RunSummary step_loop(const Scenario& sc, const Vector2d& x0, const IntegratorConfig& config,
                     const std::vector<Vector2d>& targets, SampleFn&& on_sample) {
  if (!(config.dt > 0.0) || !(config.dt < config.t_max) || !(config.origin_tol > 0.0) ||
      !(config.equilibrium_tol > 0.0) || !(config.invariance_tol > 0.0))
    throw Error(ErrorCode::PreconditionViolated, "integrator config requires 0 < dt < t_max and positive tolerances");
  if (sc.obstacle().h(x0) < 0.0)
    throw Error(ErrorCode::UnsafeStart, "initial condition lies outside the safe set");

  const long n_steps = static_cast<long>(std::ceil(config.t_max / config.dt));
  Vector2d x = x0;
  double t = 0.0;
  double min_h = sc.obstacle().h(x0);
  int origin_streak = 0;
  std::vector<int> target_streak(targets.size(), 0);

  on_sample(t, x);

  RunSummary out;
  for (long step = 1; step <= n_steps; ++step) {
    x = rk4_step(sc, x, config.dt, 1.0);
    t = step * config.dt;
    min_h = std::min(min_h, sc.obstacle().h(x));
    on_sample(t, x);

    origin_streak = (x.norm() < config.origin_tol) ? origin_streak + 1 : 0;
    if (origin_streak >= config.sustain_steps) {
      out.verdict = {VerdictKind::ConvergedToOrigin, -1};
      break;
    }
    bool done = false;
    for (size_t i = 0; i < targets.size(); ++i) {
      target_streak[i] = ((x - targets[i]).norm() < config.equilibrium_tol) ? target_streak[i] + 1 : 0;
      if (target_streak[i] >= config.sustain_steps) {
        out.verdict = {VerdictKind::ConvergedToEquilibrium, static_cast<int>(i)};
        done = true;
        break;
      }
    }
    if (done) break;
  }
  out.min_h = min_h;
  out.final_x = x;
  out.final_t = t;
  return out;
}

}  // namespace

Trajectory integrate(const Scenario& scenario, const Vector2d& x0, const IntegratorConfig& config,
                     const std::vector<Vector2d>& targets) {
  Trajectory traj;
  long count = 0;
  const int stride = std::max(1, config.record_stride);
  RunSummary summary = step_loop(scenario, x0, config, targets, [&](double t, const Vector2d& x) {
    if (count % stride == 0) {
      traj.samples.push_back(
          {t, x, scenario.obstacle().h(x), eta(scenario, x)});
    }
    ++count;
  });
  if (traj.samples.empty() || traj.samples.back().t != summary.final_t)
    traj.samples.push_back({summary.final_t, summary.final_x, scenario.obstacle().h(summary.final_x),
                            eta(scenario, summary.final_x)});
  traj.verdict = summary.verdict;
  traj.min_h = summary.min_h;
  return traj;
}

RunSummary run_to_verdict(const Scenario& scenario, const Vector2d& x0,
                          const IntegratorConfig& config, const std::vector<Vector2d>& targets) {
  return step_loop(scenario, x0, config, targets, [](double, const Vector2d&) {});
}

ManifoldTrace trace_stable_manifold(const Scenario& scenario, const EquilibriumReport& report,
                                    double epsilon, const IntegratorConfig& config) {
  if (report.kind != EquilibriumKind::Saddle)
    throw Error(ErrorCode::NotSaddle, "stable-manifold tracing requires a saddle");

  const EigenPair2 e = eigen2(report.jacobian);
  // The stable eigenvalue of a planar saddle is the negative one.
  double mu;
  Vector2d vs;
  if (e.lambda1.real() < 0.0) {
    mu = e.lambda1.real();
    vs = e.v1;
  } else {
    mu = e.lambda2.real();
    vs = e.v2;
  }

  ManifoldTrace trace;
  trace.seed_equilibrium = report.location;
  trace.stable_eigvec = vs;
  trace.mu_stable = mu;

  const Obstacle& obs = scenario.obstacle();
  const double box = 10.0 * (obs.center().norm() + obs.reference_radius());
  const double eps = (epsilon > 0.0) ? epsilon : 1e-6 * obs.reference_radius();
  const long n_steps = static_cast<long>(std::ceil(config.t_max / config.dt));
  const int stride = std::max(1, config.record_stride);

  for (int branch = 0; branch < 2; ++branch) {
    const double sgn = (branch == 0) ? 1.0 : -1.0;
    Vector2d x = report.location + sgn * eps * vs;
    Trajectory traj;
    traj.min_h = obs.h(x);
    traj.samples.push_back({0.0, x, obs.h(x), eta(scenario, x)});
    for (long step = 1; step <= n_steps; ++step) {
      try {
        x = rk4_step(scenario, x, config.dt, -1.0);  // reversed time
      } catch (const Error&) {
        break;  // branch ran into the gradient singularity inside the obstacle
      }
      const double t = step * config.dt;
      traj.min_h = std::min(traj.min_h, obs.h(x));
      if (step % stride == 0) traj.samples.push_back({t, x, obs.h(x), eta(scenario, x)});
      if (std::abs(x.x()) > box || std::abs(x.y()) > box) break;
      if (obs.h(x) < 0.0) {
        // A manifold branch may legitimately run inside the obstacle, but
        // the field degenerates at its core; stop before reaching it.
        const Vector2d d = x - obs.center();
        const double depth = obs.is_circle() ? d.norm() / obs.radius()
                                             : (obs.shape_sqrt() * d).norm();
        if (depth < 0.5) break;
      }
    }
    traj.verdict = {VerdictKind::Undetermined, -1};
    trace.branches[branch] = std::move(traj);
  }
  return trace;
}

namespace {

double halton(unsigned index, unsigned base) {
  double f = 1.0, r = 0.0;
  unsigned i = index;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

}  // namespace

Vector2d halton_point(unsigned index, const SampleBox& box) {
  return {box.x_min + (box.x_max - box.x_min) * halton(index, 2),
          box.y_min + (box.y_max - box.y_min) * halton(index, 3)};
}

SampleBox default_sample_box(const Scenario& scenario) {
  const Obstacle& obs = scenario.obstacle();
  const double w = 1.6 * (obs.center().norm() + obs.reference_radius()) + 1.0;
  return {-w, w, -w, w};
}

BasinStatistics basin_sample(const Scenario& scenario, int n_points, const IntegratorConfig& config,
                             unsigned seed, const std::vector<Vector2d>& targets,
                             const SampleBox& box) {
  BasinStatistics stats;
  stats.n = n_points;
  stats.to_equilibrium.assign(targets.size(), 0);
  stats.min_h = 0.0;
  if (n_points <= 0) return stats;
  stats.min_h = std::numeric_limits<double>::infinity();

  // Deterministic low-discrepancy starts: the seed offsets the Halton index.
  std::vector<Vector2d> starts;
  starts.reserve(n_points);
  unsigned index = 17 + seed * 7919;
  while (static_cast<int>(starts.size()) < n_points) {
    const Vector2d x0 = halton_point(index++, box);
    if (scenario.obstacle().h(x0) >= 0.0) starts.push_back(x0);
  }

  std::vector<RunSummary> results(starts.size());
  parallel_for(starts.size(), [&](size_t i) {
    results[i] = run_to_verdict(scenario, starts[i], config, targets);
  });

  for (const auto& r : results) {
    stats.min_h = std::min(stats.min_h, r.min_h);
    switch (r.verdict.kind) {
      case VerdictKind::ConvergedToOrigin: ++stats.to_origin; break;
      case VerdictKind::ConvergedToEquilibrium: ++stats.to_equilibrium[r.verdict.equilibrium_index]; break;
      case VerdictKind::Undetermined: ++stats.undetermined; break;
    }
  }
  return stats;
}

BasinStatistics basin_sample(const Scenario& scenario, int n_points, const IntegratorConfig& config,
                             unsigned seed, const std::vector<Vector2d>& targets) {
  return basin_sample(scenario, n_points, config, seed, targets, default_sample_box(scenario));
}

ProbeReport limit_cycle_probe(const Scenario& scenario, const IntegratorConfig& config,
                              const std::vector<Vector2d>& targets) {
  const Obstacle& obs = scenario.obstacle();
  std::vector<Vector2d> starts;
  for (int i = 0; i < 24; ++i) {
    const double th = 6.283185307179586 * i / 24;
    // Twice the boundary offset: a ring strictly outside the obstacle.
    const Vector2d p = obs.center() + 2.0 * (obs.boundary_point(th) - obs.center());
    if (obs.h(p) >= 0.0) starts.push_back(p);
  }
  const double far = 1.5 * (obs.center().norm() + obs.reference_radius()) + 1.0;
  for (int i = 0; i < 8; ++i) {
    const double th = 6.283185307179586 * (i + 0.5) / 8;
    const Vector2d p = far * Vector2d(std::cos(th), std::sin(th));
    if (obs.h(p) >= 0.0) starts.push_back(p);
  }

  IntegratorConfig long_cfg = config;
  long_cfg.t_max = 2.0 * config.t_max;

  ProbeReport report;
  report.n_runs = static_cast<int>(starts.size());

  std::vector<char> suspect(starts.size(), 0);
  parallel_for(starts.size(), [&](size_t i) {
    const Vector2d& x0 = starts[i];
    // Record a decimated trajectory for the recurrence test.
    IntegratorConfig cfg = long_cfg;
    cfg.record_stride = 10;
    Trajectory traj = integrate(scenario, x0, cfg, targets);
    if (traj.verdict.kind != VerdictKind::Undetermined) return;

    // Tail analysis: non-contracting |x| plus a self-return within 1e-4.
    const size_t n = traj.samples.size();
    const size_t tail_begin = n / 2;
    bool non_monotone = false;
    for (size_t k = tail_begin + 1; k < n; ++k)
      if (traj.samples[k].x.norm() > traj.samples[k - 1].x.norm() + 1e-12) non_monotone = true;
    bool returns = false;
    const double min_sep = 0.5;  // time separation for a genuine return
    for (size_t a = tail_begin; a < n && !returns; a += 5) {
      for (size_t b = a + 1; b < n; ++b) {
        if (traj.samples[b].t - traj.samples[a].t < min_sep) continue;
        if ((traj.samples[b].x - traj.samples[a].x).norm() <= 1e-4) {
          returns = true;
          break;
        }
      }
    }
    if (non_monotone && returns) suspect[i] = 1;
  });

  for (size_t i = 0; i < starts.size(); ++i)
    if (suspect[i]) report.suspect_starts.push_back(starts[i]);
  return report;
}

}  // namespace cbflab
