#pragma once

#include <Eigen/Dense>
#include <complex>

namespace cbflab {

using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

/// Eigen-structure of a real 2x2 matrix, resolved through the
/// characteristic polynomial in closed form so that realness and
/// coincidence decisions carry explicit tolerances.
struct EigenPair2 {
  std::complex<double> lambda1;  // sorted by real part; for a real pair lambda1 <= lambda2
  std::complex<double> lambda2;
  bool real_spectrum = false;
  bool repeated = false;       // eigenvalue separation below the coincidence tolerance
  bool diagonalizable = true;  // false only for a repeated defective eigenvalue
  Vector2d v1 = Vector2d::Zero();  // unit eigenvectors; valid when real_spectrum
  Vector2d v2 = Vector2d::Zero();  // for a defective matrix: a unit generalized eigenvector
};

EigenPair2 eigen2(const Matrix2d& m, double coincide_tol = 1e-9);

/// Principal (symmetric positive definite) square root of an SPD 2x2 matrix.
Matrix2d sqrt_spd2(const Matrix2d& p);

/// Q solving Atilde^T Q + Q Atilde = -I for a Hurwitz Atilde.
Matrix2d solve_lyapunov2(const Matrix2d& atilde);

inline double cross2(const Vector2d& a, const Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Exact planar Hurwitz test: trace < 0 and det > 0.
inline bool is_hurwitz2(const Matrix2d& m) {
  return m.trace() < 0.0 && m.determinant() > 0.0;
}

/// adj(M) for 2x2, so that adj(M) * M = det(M) * I.
inline Matrix2d adjugate2(const Matrix2d& m) {
  Matrix2d a;
  a << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return a;
}

/// Sine of the angle between x and the line spanned by v (direction-insensitive).
double sin_angle_to_line(const Vector2d& x, const Vector2d& v);

}  // namespace cbflab
