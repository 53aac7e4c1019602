#include "cbflab/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace cbflab {

namespace {

// Unit null direction of a (near-)rank-1 2x2 matrix: perpendicular to the
// dominant row. Sign fixed so the largest-magnitude component is positive.
Vector2d unit_null_direction(const Matrix2d& n) {
  Vector2d r0 = n.row(0).transpose();
  Vector2d r1 = n.row(1).transpose();
  Vector2d r = (r0.norm() >= r1.norm()) ? r0 : r1;
  Vector2d v(-r.y(), r.x());
  double nv = v.norm();
  if (nv == 0.0)
    return Vector2d(1.0, 0.0);  // zero matrix: any direction
  v /= nv;
  if (std::abs(v.x()) >= std::abs(v.y())) {
    if (v.x() < 0.0) v = -v;
  } else if (v.y() < 0.0) {
    v = -v;
  }
  return v;
}

}  // namespace

EigenPair2 eigen2(const Matrix2d& m, double coincide_tol) {
  EigenPair2 out;
  const double tr = m.trace();
  const double det = m.determinant();
  const double disc = tr * tr - 4.0 * det;
  const double scale = std::max(1.0, m.norm());
  const double sep = std::sqrt(std::abs(disc));

  if (sep <= coincide_tol * scale) {
    // Repeated eigenvalue.
    const double lam = 0.5 * tr;
    out.lambda1 = out.lambda2 = lam;
    out.real_spectrum = true;
    out.repeated = true;
    Matrix2d n = m - lam * Matrix2d::Identity();
    if (n.norm() <= coincide_tol * scale) {
      out.diagonalizable = true;
      out.v1 = Vector2d(1.0, 0.0);
      out.v2 = Vector2d(0.0, 1.0);
    } else {
      out.diagonalizable = false;
      out.v1 = unit_null_direction(n);
      // Generalized eigenvector: solve n * w = v1 on the dominant column
      // (consistent because n is nilpotent of rank 1).
      Vector2d c0 = n.col(0);
      Vector2d c1 = n.col(1);
      Vector2d w;
      if (c0.norm() >= c1.norm()) {
        w = Vector2d(c0.dot(out.v1) / c0.squaredNorm(), 0.0);
      } else {
        w = Vector2d(0.0, c1.dot(out.v1) / c1.squaredNorm());
      }
      double nw = w.norm();
      out.v2 = (nw > 0.0) ? Vector2d(w / nw) : Vector2d(0.0, 1.0);
    }
    return out;
  }

  if (disc > 0.0) {
    out.real_spectrum = true;
    const double root = std::sqrt(disc);
    double l1 = 0.5 * (tr - root);
    double l2 = 0.5 * (tr + root);
    out.lambda1 = l1;
    out.lambda2 = l2;
    out.v1 = unit_null_direction(m - l1 * Matrix2d::Identity());
    out.v2 = unit_null_direction(m - l2 * Matrix2d::Identity());
    return out;
  }

  // Complex conjugate pair; store the negative-imaginary member first.
  const double re = 0.5 * tr;
  const double im = 0.5 * std::sqrt(-disc);
  out.lambda1 = {re, -im};
  out.lambda2 = {re, im};
  out.real_spectrum = false;
  return out;
}

Matrix2d sqrt_spd2(const Matrix2d& p) {
  const double det = p.determinant();
  const double tr = p.trace();
  if (!(det > 0.0) || !(tr > 0.0))
    throw std::invalid_argument("sqrt_spd2: matrix is not positive definite");
  // Cayley-Hamilton closed form: E = (P + sqrt(det) I) / sqrt(tr + 2 sqrt(det)).
  const double s = std::sqrt(det);
  const double t = std::sqrt(tr + 2.0 * s);
  return (p + s * Matrix2d::Identity()) / t;
}

Matrix2d solve_lyapunov2(const Matrix2d& atilde) {
  const double a = atilde(0, 0), b = atilde(0, 1);
  const double c = atilde(1, 0), d = atilde(1, 1);
  // Unknowns (q1, q2, q3) of Q = [[q1, q2], [q2, q3]].
  Eigen::Matrix3d sys;
  Eigen::Vector3d rhs(-1.0, 0.0, -1.0);
  sys << 2.0 * a, 2.0 * c, 0.0,
         b, a + d, c,
         0.0, 2.0 * b, 2.0 * d;
  Eigen::Vector3d q = sys.fullPivLu().solve(rhs);
  Matrix2d out;
  out << q(0), q(1), q(1), q(2);
  return out;
}

double sin_angle_to_line(const Vector2d& x, const Vector2d& v) {
  const double nx = x.norm();
  const double nv = v.norm();
  if (nx == 0.0 || nv == 0.0) return 1.0;
  return std::abs(cross2(x, v)) / (nx * nv);
}

}  // namespace cbflab
