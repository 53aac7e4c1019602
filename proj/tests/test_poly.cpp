#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cbflab/poly.hpp"

using namespace cbflab;

namespace {

Poly from_roots(const std::vector<double>& roots, double lead) {
  Poly p = Poly::from_coeffs({lead});
  for (double r : roots) p = p * Poly::from_coeffs({-r, 1.0});
  return p;
}

}  // namespace

TEST_CASE("linear and quadratic closed forms") {
  CHECK(poly_real_roots(Poly::from_coeffs({-6.0, 2.0})) == std::vector<double>{3.0});
  auto r = poly_real_roots(Poly::from_coeffs({2.0, -3.0, 1.0}));  // (x-1)(x-2)
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(2.0));
  CHECK(poly_real_roots(Poly::from_coeffs({1.0, 0.0, 1.0})).empty());
}

TEST_CASE("quadratic double root is reported once") {
  auto r = poly_real_roots(Poly::from_coeffs({4.0, -4.0, 1.0}));  // (x-2)^2
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(2.0));
}

TEST_CASE("random quartics with known simple roots") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> roots{u(rng), u(rng), u(rng), u(rng)};
    std::sort(roots.begin(), roots.end());
    bool separated = true;
    for (size_t k = 1; k < roots.size(); ++k)
      if (roots[k] - roots[k - 1] < 1e-3) separated = false;
    if (!separated) continue;
    const double lead = (i % 2 == 0) ? 2.5 : -0.75;
    auto found = poly_real_roots(from_roots(roots, lead));
    REQUIRE(found.size() == 4);
    for (size_t k = 0; k < 4; ++k) CHECK(found[k] == doctest::Approx(roots[k]).epsilon(1e-9));
  }
}

TEST_CASE("even-multiplicity roots are found at critical points") {
  // (x + 1)^2 (x - 3)(x - 5): double root without a sign change.
  Poly p = from_roots({-1.0, -1.0, 3.0, 5.0}, 1.0);
  auto r = poly_real_roots(p);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(r[1] == doctest::Approx(3.0));
  CHECK(r[2] == doctest::Approx(5.0));
}

TEST_CASE("cubic with a single real root") {
  Poly p = Poly::from_coeffs({-2.0, 0.0, 0.0, 1.0});  // x^3 = 2
  auto r = poly_real_roots(p);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(std::cbrt(2.0)));
}

TEST_CASE("effective degree ignores coefficient noise") {
  Poly p = Poly::from_coeffs({-1.0, 1.0, 1e-17});
  CHECK(p.degree() == 1);
  auto r = poly_real_roots(p);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(1.0));
}
