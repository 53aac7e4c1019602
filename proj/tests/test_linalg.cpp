#include <doctest.h>

#include <random>

#include "cbflab/linalg.hpp"

using namespace cbflab;

TEST_CASE("eigen2 resolves repeated, distinct, and defective spectra") {
  Matrix2d m;
  m << -5.0, 8.0, -2.0, 3.0;  // trace -2, det 1: defective repeated -1
  EigenPair2 e = eigen2(m);
  CHECK(e.real_spectrum);
  CHECK(e.repeated);
  CHECK(e.lambda1.real() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_FALSE(e.diagonalizable);
  // v1 spans the null space of m + I.
  CHECK((m * e.v1 + e.v1).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e.v2.norm() == doctest::Approx(1.0));

  Matrix2d d;
  d << -5.0, 0.0, 0.0, -1.0;
  EigenPair2 ed = eigen2(d);
  CHECK(ed.real_spectrum);
  CHECK_FALSE(ed.repeated);
  CHECK(ed.lambda1.real() == doctest::Approx(-5.0));
  CHECK(ed.lambda2.real() == doctest::Approx(-1.0));
  CHECK(std::abs(ed.v1.x()) == doctest::Approx(1.0));
  CHECK(std::abs(ed.v2.y()) == doctest::Approx(1.0));
}

TEST_CASE("eigen2 complex pair carries conjugate eigenvalues") {
  Matrix2d m;
  m << -1.0, 2.0, -2.0, -1.0;
  EigenPair2 e = eigen2(m);
  CHECK_FALSE(e.real_spectrum);
  CHECK(e.lambda1.real() == doctest::Approx(-1.0));
  CHECK(e.lambda1.imag() == doctest::Approx(-2.0));
  CHECK(e.lambda2.imag() == doctest::Approx(2.0));
}

TEST_CASE("eigen2 eigenvalue equation holds on random matrices") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    Matrix2d m;
    m << u(rng), u(rng), u(rng), u(rng);
    EigenPair2 e = eigen2(m);
    if (!e.real_spectrum || e.repeated) continue;
    CHECK((m * e.v1 - e.lambda1.real() * e.v1).norm() < 1e-9 * (1.0 + m.norm()));
    CHECK((m * e.v2 - e.lambda2.real() * e.v2).norm() < 1e-9 * (1.0 + m.norm()));
  }
}

TEST_CASE("sqrt_spd2 reproduces the matrix and picks the SPD root") {
  Matrix2d p;
  p << 4.0, 0.0, 0.0, 1.0;
  Matrix2d e = sqrt_spd2(p);
  CHECK(e(0, 0) == doctest::Approx(2.0));
  CHECK(e(1, 1) == doctest::Approx(1.0));
  CHECK(e(0, 1) == doctest::Approx(0.0));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    Matrix2d a;
    a << u(rng), u(rng), u(rng), u(rng);
    Matrix2d spd = a.transpose() * a + 0.2 * Matrix2d::Identity();
    Matrix2d root = sqrt_spd2(spd);
    CHECK((root * root - spd).norm() < 1e-10 * spd.norm());
    CHECK(root.trace() > 0.0);
    CHECK(root.determinant() > 0.0);
    CHECK(std::abs(root(0, 1) - root(1, 0)) < 1e-12 * (1.0 + root.norm()));
  }
}

TEST_CASE("solve_lyapunov2 yields an SPD certificate for Hurwitz matrices") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int tested = 0;
  while (tested < 100) {
    Matrix2d m;
    m << u(rng), u(rng), u(rng), u(rng);
    if (!is_hurwitz2(m)) continue;
    ++tested;
    Matrix2d q = solve_lyapunov2(m);
    CHECK((m.transpose() * q + q * m + Matrix2d::Identity()).norm() < 1e-9 * (1.0 + q.norm()));
    CHECK(q.trace() > 0.0);
    CHECK(q.determinant() > 0.0);
  }
}

TEST_CASE("hurwitz test matches the trace/determinant characterization") {
  Matrix2d stable;
  stable << -5.0, 8.0, -2.0, 3.0;
  CHECK(is_hurwitz2(stable));
  Matrix2d unstable;
  unstable << 5.0, 0.0, 0.0, -1.0;
  CHECK_FALSE(is_hurwitz2(unstable));
}
