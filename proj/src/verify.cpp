#include "cbflab/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

#include "cbflab/equilibria.hpp"
#include "cbflab/filter.hpp"
#include "cbflab/oracle.hpp"
#include "cbflab/parallel.hpp"
#include "cbflab/reduction.hpp"

namespace cbflab::verify {

namespace {

struct CorpusEntry {
  Scenario scenario;
  bool eigenvector_center = false;
  bool real_spectrum = true;
};

std::vector<CorpusEntry> mixed_corpus(unsigned seed, int n) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusEntry> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int cls = i % 6;
    ScenarioData data;
    bool eig_center = false;
    switch (cls) {
      case 0:
      case 1:
        data = corpus::random_underactuated(rng);
        break;
      case 2:
        data = corpus::random_fully_actuated(rng, corpus::SpectrumShape::RealDistinct, true);
        eig_center = true;
        break;
      case 3:
      case 4:
        data = corpus::random_fully_actuated(rng, corpus::SpectrumShape::RealDistinct, false);
        break;
      default:
        data = corpus::random_fully_actuated(rng, corpus::SpectrumShape::Complex, false);
        break;
    }
    Scenario sc = validate_scenario(data);
    const bool real = sc.atilde_eigen().real_spectrum;
    out.push_back({std::move(sc), eig_center, real});
  }
  return out;
}

bool multiset_match(const std::vector<Vector2d>& a, const std::vector<Vector2d>& b, double tol,
                    double* worst) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& pa : a) {
    double best = 1e300;
    int best_i = -1;
    for (size_t i = 0; i < b.size(); ++i) {
      if (used[i]) continue;
      const double d = (pa - b[i]).norm();
      if (d < best) {
        best = d;
        best_i = static_cast<int>(i);
      }
    }
    if (best_i < 0 || best > tol) return false;
    used[best_i] = true;
    if (worst) *worst = std::max(*worst, best);
  }
  return true;
}

std::vector<Vector2d> scan_equilibria(const Scenario& sc, int samples) {
  std::vector<Vector2d> out;
  for (const auto& z : oracle::boundary_equilibrium_scan(sc, samples).zeros)
    if (z.delta < 0.0) out.push_back(z.location);
  return out;
}

}  // namespace

CheckResult filter_vs_qp(const SuiteOptions& options) {
  CheckResult result;
  result.name = "filter_vs_qp";
  std::mt19937_64 rng(options.seed);

  std::vector<Scenario> scenarios;
  for (int i = 0; i < 8; ++i) {
    switch (i % 4) {
      case 0: scenarios.push_back(validate_scenario(corpus::random_underactuated(rng))); break;
      case 1:
        scenarios.push_back(validate_scenario(
            corpus::random_fully_actuated(rng, corpus::SpectrumShape::Any, false)));
        break;
      case 2: scenarios.push_back(validate_scenario(corpus::random_ellipse(rng, 1))); break;
      default: scenarios.push_back(validate_scenario(corpus::random_ellipse(rng, 2))); break;
    }
  }

  std::uniform_real_distribution<double> coord(-6.0, 6.0);
  double worst = 0.0;
  int failures = 0;
  int tested = 0;
  for (int i = 0; i < options.n_states; ++i) {
    const Scenario& sc = scenarios[i % scenarios.size()];
    const Vector2d x(coord(rng), coord(rng));
    try {
      FilterEvaluation eval = safety_filter(sc, x);
      VectorXd ref = oracle::qp_reference_solver(sc, x);
      const double dev = (eval.v - ref).norm() / std::max(1.0, ref.norm());
      worst = std::max(worst, dev);
      if (dev > 1e-8) ++failures;
      if (eval.eta < 0.0) {
        // Active constraint must hold with equality for the reference.
        const Vector2d w = sc.obstacle().grad_h(x);
        const double slack = (sc.system().B.transpose() * w).dot(ref) + eval.eta;
        if (std::abs(slack) > 1e-10 * std::max(1.0, std::abs(eval.eta))) ++failures;
      }
      ++tested;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateGradient) throw;
    }
  }
  result.count = tested;
  result.failures = failures;
  result.worst = worst;
  result.pass = (failures == 0);
  return result;
}

CheckResult equilibria_vs_scan(const SuiteOptions& options) {
  CheckResult result;
  result.name = "equilibria_vs_scan";
  std::vector<CorpusEntry> entries = mixed_corpus(options.seed + 1, options.n_scenarios);
  {
    std::mt19937_64 rng(options.seed + 2);
    const int extra = std::max(2, options.n_scenarios / 10);
    for (int i = 0; i < extra; ++i) {
      entries.push_back({validate_scenario(corpus::random_ellipse(rng, (i % 2) + 1)), false, true});
    }
  }

  std::atomic<int> failures{0};
  std::mutex mtx;
  double worst = 0.0;
  parallel_for(entries.size(), [&](size_t i) {
    const Scenario& sc = entries[i].scenario;
    std::vector<Vector2d> analytic;
    for (const auto& rep : analyze_equilibria(sc).reports) analytic.push_back(rep.location);
    std::vector<Vector2d> scanned = scan_equilibria(sc, options.scan_samples);
    double local_worst = 0.0;
    if (!multiset_match(analytic, scanned, 1e-6, &local_worst)) {
      failures.fetch_add(1);
      return;
    }
    std::lock_guard<std::mutex> lock(mtx);
    worst = std::max(worst, local_worst);
  });

  result.count = static_cast<int>(entries.size());
  result.failures = failures.load();
  result.worst = worst;
  result.pass = (result.failures == 0);
  return result;
}

CheckResult jacobian_identities(const SuiteOptions& options) {
  CheckResult result;
  result.name = "jacobian_identities";
  // Same base corpus as the scan cross-check, so the two suites exercise
  // the identical scenario set.
  std::vector<CorpusEntry> entries = mixed_corpus(options.seed + 1, options.n_scenarios);

  std::atomic<int> failures{0};
  std::atomic<int> count{0};
  std::mutex mtx;
  double worst = 0.0;
  parallel_for(entries.size(), [&](size_t i) {
    const Scenario& sc = entries[i].scenario;
    ScenarioData scaled = sc.data();
    scaled.config.alpha0 *= 10.0;
    const Scenario sc10 = validate_scenario(scaled);
    const double a0 = sc.alpha0();

    for (const auto& rep : analyze_equilibria(sc).reports) {
      count.fetch_add(1);
      const Vector2d w = sc.obstacle().grad_h(rep.location);
      const double lhs = (rep.jacobian.transpose() * w + a0 * w).norm();
      const double rel = lhs / (std::max(1.0, a0) * w.norm());
      bool ok = rel <= 1e-8;

      // The non-(-alpha0) eigenvalue must survive a tenfold alpha0 change.
      const Matrix2d j10 = jacobian_at_boundary(sc10, rep.location);
      auto second_eig = [](const Matrix2d& j, double alpha) {
        const EigenPair2 e = eigen2(j);
        return (std::abs(e.lambda1.real() + alpha) > std::abs(e.lambda2.real() + alpha))
                   ? e.lambda1
                   : e.lambda2;
      };
      const std::complex<double> mu = second_eig(rep.jacobian, a0);
      const std::complex<double> mu10 = second_eig(j10, 10.0 * a0);
      const double drift = std::abs(mu - mu10);
      ok = ok && drift <= 1e-8;

      if (!ok) failures.fetch_add(1);
      std::lock_guard<std::mutex> lock(mtx);
      worst = std::max(worst, std::max(rel, drift));
    }
  });

  result.count = count.load();
  result.failures = failures.load();
  result.worst = worst;
  result.pass = (result.failures == 0) && result.count > 0;
  return result;
}

CheckResult reduction_roundtrip(const SuiteOptions& options) {
  CheckResult result;
  result.name = "reduction_roundtrip";
  std::mt19937_64 rng(options.seed + 4);
  std::vector<Scenario> scenarios;
  for (int i = 0; i < options.n_ellipses; ++i)
    scenarios.push_back(validate_scenario(corpus::random_ellipse(rng, (i % 2) + 1)));

  std::atomic<int> failures{0};
  std::mutex mtx;
  double worst = 0.0;
  parallel_for(scenarios.size(), [&](size_t i) {
    const Scenario& sc = scenarios[i];
    const ReducedScenario red = reduce(sc);
    const Matrix2d einv = red.e.inverse();

    std::vector<Vector2d> hat = scan_equilibria(red.transported, options.scan_samples);
    std::vector<Vector2d> mapped;
    for (const auto& p : hat) mapped.push_back(einv * p);
    std::vector<Vector2d> direct = scan_equilibria(sc, options.scan_samples);

    double local_worst = 0.0;
    if (!multiset_match(mapped, direct, 1e-6, &local_worst)) {
      failures.fetch_add(1);
      return;
    }
    // Similarity of the Jacobians: identical spectra. The tolerance is
    // relative above unit magnitude; near-degenerate-gradient equilibria
    // can push |J| to 1e4, where an absolute 1e-9 sits below what double
    // precision propagates through the two evaluation routes.
    for (const auto& p_hat : hat) {
      const EigenPair2 ehat = eigen2(jacobian_at_boundary(red.transported, p_hat));
      const EigenPair2 eorig = eigen2(jacobian_at_boundary(sc, einv * p_hat));
      const double dev1 =
          std::abs(ehat.lambda1 - eorig.lambda1) / std::max(1.0, std::abs(eorig.lambda1));
      const double dev2 =
          std::abs(ehat.lambda2 - eorig.lambda2) / std::max(1.0, std::abs(eorig.lambda2));
      const double dev = std::max(dev1, dev2);
      local_worst = std::max(local_worst, dev);
      if (dev > 1e-9) {
        failures.fetch_add(1);
        return;
      }
    }
    std::lock_guard<std::mutex> lock(mtx);
    worst = std::max(worst, local_worst);
  });

  result.count = static_cast<int>(scenarios.size());
  result.failures = failures.load();
  result.worst = worst;
  result.pass = (result.failures == 0);
  return result;
}

CheckResult count_claims(const SuiteOptions& options) {
  CheckResult result;
  result.name = "count_claims";
  std::mt19937_64 rng(options.seed + 5);

  int failures = 0;
  int count = 0;
  for (int i = 0; i < options.n_scenarios; ++i) {
    const Scenario sc = validate_scenario(corpus::random_underactuated(rng));
    const EquilibriaResult res = analyze_equilibria(sc);
    ++count;
    if (res.reports.size() != 1 || res.reports[0].kind != EquilibriumKind::Saddle) ++failures;
  }
  for (int i = 0; i < options.n_scenarios; ++i) {
    const bool eig_center = (i % 3 == 0);
    const Scenario sc = validate_scenario(corpus::random_fully_actuated(
        rng, eig_center ? corpus::SpectrumShape::RealDistinct : corpus::SpectrumShape::Any,
        eig_center));
    const EquilibriaResult res = analyze_equilibria(sc);
    ++count;
    const size_t n_undesirable = res.reports.size();
    int positive = 0;
    for (const auto& p : res.diagnosis.potential)
      if (p.indicator > 0.0) ++positive;
    bool ok = n_undesirable >= 1 && n_undesirable <= 3 && positive >= 1;
    if (ok && !eig_center && sc.atilde_eigen().real_spectrum) {
      const double l1 = sc.atilde_eigen().lambda1.real();
      bool tail = false;
      for (const auto& rep : res.reports)
        if (rep.indicator < l1 / 2.0) tail = true;
      ok = tail;
    }
    if (!ok) ++failures;
  }

  result.count = count;
  result.failures = failures;
  result.pass = (failures == 0);
  return result;
}

std::vector<CheckResult> run_all(const SuiteOptions& options) {
  return {filter_vs_qp(options), equilibria_vs_scan(options), jacobian_identities(options),
          reduction_roundtrip(options), count_claims(options)};
}

}  // namespace cbflab::verify
