#include <doctest.h>

#include <random>

#include "cbflab/filter.hpp"
#include "cbflab/oracle.hpp"
#include "cbflab/reduction.hpp"
#include "cbflab/simulate.hpp"
#include "support/helpers.hpp"

using namespace cbflab;

namespace {

Scenario ellipse_scenario(const Matrix2d& p, const Vector2d& xc) {
  PlanarLTISystem sys;
  sys.A << -1.0, 0.3, 0.0, -2.0;
  sys.B = MatrixXd::Identity(2, 2);
  sys.K = MatrixXd::Zero(2, 2);
  return validate_scenario(sys, Obstacle::ellipse(xc, p), FilterConfig{10.0});
}

}  // namespace

TEST_CASE("identity shape gives an identity transform") {
  Scenario sc = ellipse_scenario(Matrix2d::Identity(), {3.0, 2.0});
  ReducedScenario red = reduce(sc);
  CHECK((red.e - Matrix2d::Identity()).norm() < 1e-14);
  CHECK((red.fixed_rule.obstacle().center() - Vector2d(3.0, 2.0)).norm() < 1e-14);
  CHECK(red.fixed_rule.obstacle().radius() == doctest::Approx(1.0));
  CHECK((red.fixed_rule.atilde() - sc.atilde()).norm() < 1e-14);
}

TEST_CASE("diagonal shape: principal square root and mapped center") {
  Matrix2d p;
  p << 4.0, 0.0, 0.0, 1.0;
  Scenario sc = ellipse_scenario(p, {1.0, 0.0});
  ReducedScenario red = reduce(sc);
  CHECK(red.e(0, 0) == doctest::Approx(2.0));
  CHECK(red.e(1, 1) == doctest::Approx(1.0));
  CHECK((red.fixed_rule.obstacle().center() - Vector2d(2.0, 0.0)).norm() < 1e-14);
}

TEST_CASE("reduction invariants: shape recovery and spectrum preservation") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 100; ++i) {
    Scenario sc = validate_scenario(corpus::random_ellipse(rng, (i % 2) + 1));
    ReducedScenario red = reduce(sc);
    CHECK((red.e * red.e - sc.obstacle().shape()).norm() <= 1e-10 * sc.obstacle().shape().norm());
    // Similar closed loops share the spectrum, so stabilizability carries over.
    EigenPair2 orig = sc.atilde_eigen();
    EigenPair2 hat = red.fixed_rule.atilde_eigen();
    CHECK(std::abs(orig.lambda1 - hat.lambda1) < 1e-8 * (1.0 + std::abs(orig.lambda1)));
    CHECK(std::abs(orig.lambda2 - hat.lambda2) < 1e-8 * (1.0 + std::abs(orig.lambda2)));
    CHECK(is_hurwitz2(red.fixed_rule.atilde()));
  }
}

TEST_CASE("reduce refuses circular obstacles") {
  Scenario sc = cbflab::testing::experiment_scenario("fig1b");
  CHECK_THROWS_AS(reduce(sc), Error);
}

TEST_CASE("map_back applies the similarity and keeps the labels") {
  Scenario sc = cbflab::testing::experiment_scenario("fig1b");
  EquilibriaResult res = analyze_equilibria(sc);
  REQUIRE(res.reports.size() == 1);

  EquilibriumReport same = map_back(res.reports[0], Matrix2d::Identity());
  CHECK((same.location - res.reports[0].location).norm() == 0.0);
  CHECK((same.jacobian - res.reports[0].jacobian).norm() == 0.0);

  Matrix2d e;
  e << 2.0, 0.5, 0.5, 1.0;
  EquilibriumReport mapped = map_back(res.reports[0], e);
  EigenPair2 before = eigen2(res.reports[0].jacobian);
  EigenPair2 after = eigen2(mapped.jacobian);
  CHECK(std::abs(before.lambda1 - after.lambda1) < 1e-9);
  CHECK(std::abs(before.lambda2 - after.lambda2) < 1e-9);
  CHECK(mapped.kind == res.reports[0].kind);
}

TEST_CASE("round trip: reduced equilibria map onto the direct ellipse set") {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 20; ++i) {
    Scenario sc = validate_scenario(corpus::random_ellipse(rng, (i % 2) + 1));
    ReducedScenario red = reduce(sc);
    const Matrix2d einv = red.e.inverse();

    auto hat_scan = oracle::boundary_equilibrium_scan(red.transported, 1024);
    auto direct_scan = oracle::boundary_equilibrium_scan(sc, 1024);
    std::vector<Vector2d> mapped;
    for (const auto& z : hat_scan.zeros)
      if (z.delta < 0.0) mapped.push_back(einv * z.location);
    std::vector<Vector2d> direct;
    for (const auto& z : direct_scan.zeros)
      if (z.delta < 0.0) direct.push_back(z.location);

    REQUIRE(mapped.size() == direct.size());
    for (const auto& p : mapped) {
      double best = 1e300;
      for (const auto& q : direct) best = std::min(best, (p - q).norm());
      CHECK(best <= 1e-6);
    }
  }
}

TEST_CASE("forward invariance holds on both sides of the transform") {
  std::mt19937_64 rng(53);
  Scenario sc = validate_scenario(corpus::random_ellipse(rng, 1));
  ReducedScenario red = reduce(sc);
  IntegratorConfig cfg;
  cfg.t_max = 20.0;

  std::mt19937_64 start_rng(54);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  int tested = 0;
  while (tested < 5) {
    const Vector2d x0(u(start_rng), u(start_rng));
    if (sc.obstacle().h(x0) < 0.1) continue;
    ++tested;
    RunSummary orig = run_to_verdict(sc, x0, cfg);
    RunSummary hat = run_to_verdict(red.transported, red.e * x0, cfg);
    CHECK(orig.min_h >= -1e-6);
    CHECK(hat.min_h >= -1e-6);
    // Exactly conjugate flows: terminal states correspond through E.
    CHECK((red.e * orig.final_x - hat.final_x).norm() < 1e-6 * (1.0 + hat.final_x.norm()));
  }
}

TEST_CASE("analytic ellipse enumeration matches the scan for both actuations") {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 16; ++i) {
    Scenario sc = validate_scenario(corpus::random_ellipse(rng, (i % 2) + 1));
    EquilibriaResult res = analyze_equilibria(sc);
    auto scan = oracle::boundary_equilibrium_scan(sc, 1024);
    std::vector<Vector2d> scanned;
    for (const auto& z : scan.zeros)
      if (z.delta < 0.0) scanned.push_back(z.location);
    REQUIRE(res.reports.size() == scanned.size());
    for (const auto& rep : res.reports) {
      double best = 1e300;
      for (const auto& q : scanned) best = std::min(best, (rep.location - q).norm());
      CHECK(best <= 1e-6);
      CHECK(equilibrium_residual(sc, rep.location, rep.indicator) <= 1e-8);
    }
  }
}

TEST_CASE("weighting conventions differ for invertible B") {
  // Transported weighting keeps the original G; the standalone rule derives
  // it from the transformed input matrix. For invertible B the two reduced
  // systems have different fields, hence generally different equilibria.
  Matrix2d p;
  p << 4.0, 0.0, 0.0, 1.0;
  Scenario sc = ellipse_scenario(p, {1.2, 0.5});
  ReducedScenario red = reduce(sc);
  const Matrix2d einv = red.e.inverse();

  auto fixed_scan = oracle::boundary_equilibrium_scan(red.fixed_rule, 1024);
  bool all_match_original = true;
  int negatives = 0;
  for (const auto& z : fixed_scan.zeros) {
    if (z.delta >= 0.0) continue;
    ++negatives;
    const Vector2d back = einv * z.location;
    const double residual = equilibrium_residual(sc, back, indicator(sc, back));
    if (residual > 1e-6) all_match_original = false;
  }
  REQUIRE(negatives >= 1);
  CHECK_FALSE(all_match_original);

  // The transported convention, by contrast, is exactly conjugate.
  auto transported_scan = oracle::boundary_equilibrium_scan(red.transported, 1024);
  for (const auto& z : transported_scan.zeros) {
    if (z.delta >= 0.0) continue;
    const Vector2d back = einv * z.location;
    CHECK(equilibrium_residual(sc, back, indicator(sc, back)) <= 1e-6);
  }
}
