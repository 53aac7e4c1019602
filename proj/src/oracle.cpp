#include "cbflab/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cbflab/assumptions.hpp"
#include "cbflab/filter.hpp"
#include "cbflab/reduction.hpp"

namespace cbflab::oracle {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double tangential_component(const Scenario& sc, double theta) {
  const Obstacle& obs = sc.obstacle();
  const Vector2d p = obs.boundary_point(theta);
  const Vector2d t = obs.boundary_tangent(theta).normalized();
  return closed_loop_field(sc, p).dot(t);
}

double field_norm(const Scenario& sc, double theta) {
  return closed_loop_field(sc, sc.obstacle().boundary_point(theta)).norm();
}

// Bisection on the tangential component over a bracketing interval.
double refine_sign_change(const Scenario& sc, double lo, double hi, double glo) {
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = tangential_component(sc, mid);
    if (gm == 0.0) return mid;
    if ((glo < 0.0) == (gm < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimization of |F| for tangency zeros that do not
// produce a sign change.
double refine_minimum(const Scenario& sc, double lo, double hi) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = field_norm(sc, x1);
  double f2 = field_norm(sc, x2);
  for (int i = 0; i < 120 && (b - a) > 1e-15; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = field_norm(sc, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = field_norm(sc, x2);
    }
  }
  return 0.5 * (a + b);
}

struct ScanPass {
  std::vector<BoundaryScan::Zero> zeros;
};

ScanPass scan_once(const Scenario& sc, int n) {
  ScanPass pass;
  const Obstacle& obs = sc.obstacle();
  const double scale_f = std::max(1.0, sc.atilde().norm() * (obs.center().norm() + 1.0 +
                                                             obs.reference_radius()));
  const double accept = 1e-8 * scale_f;

  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = tangential_component(sc, kTwoPi * i / n);

  std::vector<double> candidates;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double lo = kTwoPi * i / n;
    const double hi = kTwoPi * (i + 1) / n;
    if (g[i] == 0.0) {
      candidates.push_back(lo);
    } else if ((g[i] < 0.0) != (g[j] < 0.0)) {
      candidates.push_back(refine_sign_change(sc, lo, hi, g[i]));
    }
    // Local |g| minimum without a sign change: possible tangency zero.
    const int k = (i + n - 1) % n;
    if ((g[i] < 0.0) == (g[j] < 0.0) && (g[i] < 0.0) == (g[k] < 0.0) &&
        std::abs(g[i]) < std::abs(g[j]) && std::abs(g[i]) < std::abs(g[k]) &&
        std::abs(g[i]) < 0.05 * scale_f) {
      candidates.push_back(refine_minimum(sc, kTwoPi * (i - 1) / n, kTwoPi * (i + 1) / n));
    }
  }

  for (double theta : candidates) {
    const Vector2d p = obs.boundary_point(theta);
    const double res = closed_loop_field(sc, p).norm();
    if (res > accept) continue;
    BoundaryScan::Zero z;
    z.angle = std::fmod(theta + kTwoPi, kTwoPi);
    z.location = p;
    z.residual = res;
    z.delta = indicator(sc, p);
    pass.zeros.push_back(z);
  }

  std::sort(pass.zeros.begin(), pass.zeros.end(),
            [](const auto& a, const auto& b) { return a.angle < b.angle; });
  // Deduplicate by location (tangency zeros may be found twice).
  std::vector<BoundaryScan::Zero> unique;
  const double loc_tol = 1e-6 * (1.0 + obs.center().norm() + obs.reference_radius());
  for (const auto& z : pass.zeros) {
    bool dup = false;
    for (const auto& u : unique)
      if ((u.location - z.location).norm() <= loc_tol) dup = true;
    if (!dup) unique.push_back(z);
  }
  pass.zeros = std::move(unique);
  return pass;
}

bool zero_sets_match(const ScanPass& a, const ScanPass& b, double tol) {
  if (a.zeros.size() != b.zeros.size()) return false;
  std::vector<bool> used(b.zeros.size(), false);
  for (const auto& za : a.zeros) {
    bool found = false;
    for (size_t i = 0; i < b.zeros.size(); ++i) {
      if (!used[i] && (za.location - b.zeros[i].location).norm() <= tol) {
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

BoundaryScan boundary_equilibrium_scan(const Scenario& scenario, int n_samples) {
  if (n_samples < 1000)
    throw Error(ErrorCode::PreconditionViolated, "boundary scan needs at least 1000 samples");
  const double tol =
      1e-6 * (1.0 + scenario.obstacle().center().norm() + scenario.obstacle().reference_radius());
  int n = n_samples;
  ScanPass prev = scan_once(scenario, n);
  for (int pass = 0; pass < 5; ++pass) {
    const int n2 = n * 2;
    ScanPass next = scan_once(scenario, n2);
    if (zero_sets_match(prev, next, tol)) {
      BoundaryScan out;
      out.samples = n2;
      out.zeros = std::move(next.zeros);
      return out;
    }
    prev = std::move(next);
    n = n2;
  }
  BoundaryScan out;
  out.samples = n;
  out.zeros = std::move(prev.zeros);
  return out;
}

VectorXd qp_reference_solver(const Scenario& scenario, const Vector2d& x) {
  const Obstacle& obs = scenario.obstacle();
  const Vector2d w = obs.grad_h(x);
  const double margin = w.dot(scenario.atilde() * x) + scenario.alpha0() * obs.h(x);
  const int m = scenario.input_dim();
  if (margin >= 0.0) return VectorXd::Zero(m);

  const VectorXd a = scenario.system().B.transpose() * w;
  if (a.norm() < 1e-12)
    throw Error(ErrorCode::DegenerateGradient, "constraint row vanishes where the QP is active");

  // Bordered KKT system for the active constraint:
  //   [ 2G  -a ] [theta]   [   0    ]
  //   [ a^T  0 ] [ mu  ] = [ -margin ]
  const int nn = m + 1;
  std::array<std::array<double, 3>, 3> mat{};
  std::array<double, 3> rhs{};
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) mat[i][j] = 2.0 * scenario.weighting()(i, j);
    mat[i][m] = -a(i);
    mat[m][i] = a(i);
    rhs[i] = 0.0;
  }
  mat[m][m] = 0.0;
  rhs[m] = -margin;

  // Gaussian elimination with partial pivoting on the (m+1) x (m+1) block.
  std::array<int, 3> perm{0, 1, 2};
  for (int col = 0; col < nn; ++col) {
    int piv = col;
    for (int row = col + 1; row < nn; ++row)
      if (std::abs(mat[perm[row]][col]) > std::abs(mat[perm[piv]][col])) piv = row;
    std::swap(perm[col], perm[piv]);
    const double diag = mat[perm[col]][col];
    for (int row = col + 1; row < nn; ++row) {
      const double f = mat[perm[row]][col] / diag;
      for (int j = col; j < nn; ++j) mat[perm[row]][j] -= f * mat[perm[col]][j];
      rhs[perm[row]] -= f * rhs[perm[col]];
    }
  }
  std::array<double, 3> sol{};
  for (int row = nn - 1; row >= 0; --row) {
    double s = rhs[perm[row]];
    for (int j = row + 1; j < nn; ++j) s -= mat[perm[row]][j] * sol[j];
    sol[row] = s / mat[perm[row]][row];
  }

  VectorXd theta(m);
  for (int i = 0; i < m; ++i) theta(i) = sol[i];
  return theta;
}

Matrix2d finite_difference_jacobian(const Scenario& scenario, const Vector2d& p, double step) {
  step = std::clamp(step, 1e-8, 1e-4);
  const Vector2d f0 = closed_loop_field(scenario, p);
  Matrix2d jac;
  for (int j = 0; j < 2; ++j) {
    Vector2d e = Vector2d::Zero();
    e(j) = step;
    // Step toward the side where the constraint margin decreases, so the
    // quotient samples the active branch only.
    const double plus = eta(scenario, p + e);
    const double minus = eta(scenario, p - e);
    const double sign = (plus <= minus) ? 1.0 : -1.0;
    jac.col(j) = (closed_loop_field(scenario, p + sign * e) - f0) / (sign * step);
  }
  return jac;
}

}  // namespace cbflab::oracle

namespace cbflab::corpus {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Obstacle random_circle(std::mt19937_64& rng) {
  const double angle = uniform(rng, 0.0, 6.283185307179586);
  const double dist = uniform(rng, 1.5, 4.0);
  const double r = uniform(rng, 0.3, std::min(1.5, 0.7 * dist));
  return Obstacle::circle(dist * Vector2d(std::cos(angle), std::sin(angle)), r);
}

// Pole placement for a controllable single-input pair via the
// characteristic-polynomial form of Ackermann's formula.
MatrixXd place_poles(const Matrix2d& a, const Vector2d& b, double l1, double l2) {
  Matrix2d ctrb;
  ctrb.col(0) = b;
  ctrb.col(1) = a * b;
  const Matrix2d chi = a * a - (l1 + l2) * a + l1 * l2 * Matrix2d::Identity();
  const Eigen::RowVector2d k = Eigen::RowVector2d(0.0, 1.0) * ctrb.inverse() * chi;
  MatrixXd kk(1, 2);
  kk << k(0), k(1);
  return kk;
}

}  // namespace

ScenarioData random_underactuated(std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 4000; ++attempt) {
    PlanarLTISystem sys;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) sys.A(i, j) = uniform(rng, -2.0, 2.0);
    Vector2d b(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
    if (b.norm() < 0.3) continue;
    if (std::abs(cross2(b, sys.A * b)) < 0.05 * b.norm() * (sys.A * b).norm() + 1e-9) continue;
    const double l1 = uniform(rng, -3.0, -0.3);
    const double l2 = uniform(rng, -3.0, -0.3);
    sys.B = b;
    sys.K = place_poles(sys.A, b, l1, l2);
    if (!is_hurwitz2(sys.closed_loop())) continue;

    ScenarioData data{sys, random_circle(rng), FilterConfig{10.0}};
    AssumptionReport checks = check_assumptions(data);
    if (!checks.all_hold()) continue;
    return data;
  }
  throw Error(ErrorCode::RootFindingFailed, "single-input corpus sampling did not converge");
}

ScenarioData random_fully_actuated(std::mt19937_64& rng, SpectrumShape shape,
                                   bool eigenvector_center) {
  for (int attempt = 0; attempt < 4000; ++attempt) {
    bool want_complex = (shape == SpectrumShape::Complex);
    if (shape == SpectrumShape::Any) want_complex = uniform(rng, 0.0, 1.0) < 0.3;

    Matrix2d atilde;
    Vector2d v1, v2;
    if (want_complex) {
      const double re = uniform(rng, -2.5, -0.3);
      const double im = uniform(rng, 0.3, 2.0);
      Matrix2d core;
      core << re, im, -im, re;
      const double ang = uniform(rng, 0.0, 3.14159);
      const double sk = uniform(rng, 0.6, 1.6);
      Matrix2d t;
      t << std::cos(ang), -sk * std::sin(ang), std::sin(ang), sk * std::cos(ang);
      if (std::abs(t.determinant()) < 0.2) continue;
      atilde = t * core * t.inverse();
      v1 = v2 = Vector2d::Zero();
    } else {
      const double l1 = uniform(rng, -4.0, -0.4);
      double l2 = uniform(rng, -4.0, -0.4);
      if (std::abs(l1 - l2) < 0.15) continue;
      const double phi1 = uniform(rng, 0.0, 6.283185307179586);
      const double gap = uniform(rng, 0.45, 3.14159 - 0.45);
      v1 = Vector2d(std::cos(phi1), std::sin(phi1));
      v2 = Vector2d(std::cos(phi1 + gap), std::sin(phi1 + gap));
      Matrix2d basis;
      basis.col(0) = v1;
      basis.col(1) = v2;
      Matrix2d lambda = Matrix2d::Zero();
      lambda(0, 0) = std::min(l1, l2);
      lambda(1, 1) = std::max(l1, l2);
      atilde = basis * lambda * basis.inverse();
    }

    PlanarLTISystem sys;
    sys.B = MatrixXd(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) sys.B(i, j) = uniform(rng, -2.0, 2.0);
    if (std::abs(sys.B.determinant()) < 0.3) continue;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) sys.A(i, j) = uniform(rng, -2.0, 2.0);
    sys.K = sys.B.inverse() * (sys.A - atilde);
    if (!is_hurwitz2(sys.closed_loop())) continue;

    Obstacle obstacle = random_circle(rng);
    if (eigenvector_center) {
      if (want_complex) continue;  // a real center cannot align to a complex pair
      const Vector2d dir = (uniform(rng, 0.0, 1.0) < 0.5) ? v1 : v2;
      const double dist = uniform(rng, 1.5, 4.0);
      const double sgn = (uniform(rng, 0.0, 1.0) < 0.5) ? 1.0 : -1.0;
      const double r = uniform(rng, 0.3, std::min(1.5, 0.7 * dist));
      obstacle = Obstacle::circle(sgn * dist * dir, r);
    } else if (!want_complex) {
      if (sin_angle_to_line(obstacle.center(), v1) < 1e-3 ||
          sin_angle_to_line(obstacle.center(), v2) < 1e-3)
        continue;
    }

    ScenarioData data{sys, obstacle, FilterConfig{10.0}};
    if (!check_origin_interior(data.obstacle)) continue;
    return data;
  }
  throw Error(ErrorCode::RootFindingFailed, "fully-actuated corpus sampling did not converge");
}

ScenarioData random_ellipse(std::mt19937_64& rng, int input_dim) {
  for (int attempt = 0; attempt < 4000; ++attempt) {
    const double ang = uniform(rng, 0.0, 3.14159);
    Matrix2d rot;
    rot << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
    Matrix2d diag = Matrix2d::Zero();
    diag(0, 0) = uniform(rng, 0.4, 2.5);
    diag(1, 1) = uniform(rng, 0.4, 2.5);
    const Matrix2d p = rot * diag * rot.transpose();

    const double dir_ang = uniform(rng, 0.0, 6.283185307179586);
    const Vector2d dir(std::cos(dir_ang), std::sin(dir_ang));
    const double level = 1.0 + uniform(rng, 0.6, 6.0);  // xc^T P xc strictly above 1
    const Vector2d xc = std::sqrt(level / dir.dot(p * dir)) * dir;
    Obstacle obstacle = Obstacle::ellipse(xc, p);

    ScenarioData base = (input_dim == 1)
                            ? random_underactuated(rng)
                            : random_fully_actuated(rng, SpectrumShape::Any, false);
    ScenarioData data{base.system, obstacle, base.config};
    AssumptionReport checks = check_assumptions(data);
    if (!checks.all_hold()) continue;
    return data;
  }
  throw Error(ErrorCode::RootFindingFailed, "ellipse corpus sampling did not converge");
}

}  // namespace cbflab::corpus
