#include <doctest.h>

#include <sstream>

#include "cbflab/filter.hpp"
#include "cbflab/portrait.hpp"
#include "support/helpers.hpp"

using namespace cbflab;
using cbflab::testing::experiment_scenario;

namespace {

PortraitSpec small_spec(const Window& window, int grid) {
  PortraitSpec spec;
  spec.window = window;
  spec.grid = grid;
  spec.integrator.t_max = 5.0;
  return spec;
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("portrait is deterministic byte for byte") {
  Scenario sc = experiment_scenario("fig1a");
  PortraitSpec spec = small_spec({-6.0, 6.0, -6.0, 6.0}, 16);
  spec.trajectories = {{5.0, 5.0}, {-4.0, 2.0}};
  PortraitResult a = render_portrait(sc, spec);
  PortraitResult b = render_portrait(sc, spec);
  CHECK(a.svg == b.svg);
  CHECK(a.field_csv == b.field_csv);
}

TEST_CASE("markers reflect the classification") {
  Scenario fig1a = experiment_scenario("fig1a");
  PortraitResult pa = render_portrait(fig1a, small_spec({-6.0, 6.0, -6.0, 6.0}, 12));
  CHECK(count_occurrences(pa.svg, "eq-saddle") == 1);
  CHECK(count_occurrences(pa.svg, "class=\"origin\"") == 1);
  CHECK(count_occurrences(pa.svg, "class=\"obstacle\"") == 1);

  Scenario fig1d = experiment_scenario("fig1d");
  PortraitResult pd = render_portrait(fig1d, small_spec({-5.0, 5.0, -5.0, 5.0}, 12));
  CHECK(count_occurrences(pd.svg, "eq-saddle") == 2);
  CHECK(count_occurrences(pd.svg, "eq-stable") == 1);
}

TEST_CASE("field CSV rows count the grid exactly") {
  Scenario sc = experiment_scenario("fig1b");
  PortraitResult result = render_portrait(sc, small_spec({-4.0, 4.0, -4.0, 4.0}, 2));
  std::istringstream lines(result.field_csv);
  std::string line;
  int rows = 0;
  bool header = true;
  while (std::getline(lines, line)) {
    if (header) {
      CHECK(line == "x1,x2,F1,F2");
      header = false;
      continue;
    }
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("CSV field values come from the same evaluation path as the simulator") {
  Scenario sc = experiment_scenario("fig1b");
  PortraitResult result = render_portrait(sc, small_spec({-4.0, 4.0, -4.0, 4.0}, 3));
  std::istringstream lines(result.field_csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    double v[4];
    char comma;
    cells >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3];
    const Vector2d f = closed_loop_field(sc, {v[0], v[1]});
    // Values round-trip through 9-significant-digit formatting.
    CHECK(std::abs(f.x() - v[2]) <= 1e-8 * std::max(1.0, std::abs(f.x())));
    CHECK(std::abs(f.y() - v[3]) <= 1e-8 * std::max(1.0, std::abs(f.y())));
  }
}

TEST_CASE("window must contain the obstacle and the origin") {
  Scenario sc = experiment_scenario("fig1a");  // obstacle at (3, 2)
  try {
    render_portrait(sc, small_spec({-1.0, 2.0, -1.0, 2.0}, 12));
    FAIL("expected WindowExcludesObstacle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowExcludesObstacle);
  }
  try {
    render_portrait(sc, small_spec({1.0, 6.0, 0.5, 6.0}, 12));  // excludes the origin
    FAIL("expected WindowExcludesObstacle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowExcludesObstacle);
  }
}

TEST_CASE("default spec covers the scenario geometry") {
  for (const char* name : {"fig1a", "fig1b", "fig1c", "fig1d"}) {
    Scenario sc = experiment_scenario(name);
    PortraitSpec spec = default_portrait_spec(sc);
    CHECK(spec.grid >= 10);
    CHECK_NOTHROW(render_portrait(sc, small_spec(spec.window, 10)));
  }
}

TEST_CASE("ellipsoidal obstacles render with the rotated outline") {
  PlanarLTISystem sys;
  sys.A << -1.0, 0.0, 0.0, -2.0;
  sys.B = MatrixXd::Identity(2, 2);
  sys.K = MatrixXd::Zero(2, 2);
  Matrix2d p;
  p << 2.0, 0.5, 0.5, 1.0;
  Scenario sc =
      validate_scenario(sys, Obstacle::ellipse({2.0, 1.0}, p), FilterConfig{10.0});
  PortraitResult result = render_portrait(sc, small_spec({-6.0, 6.0, -6.0, 6.0}, 10));
  CHECK(count_occurrences(result.svg, "class=\"obstacle\"") == 1);
  CHECK(count_occurrences(result.svg, "rotate(") == 1);
}
