#pragma once

#include <vector>

namespace cbflab {

/// Dense univariate polynomial with ascending coefficients.
///
/// Real-root isolation works by recursive critical-point bracketing: the
/// real roots of p' split the line into monotone intervals, each holding
/// at most one sign change of p. Sign changes are certified by bisection
/// and polished by Newton; critical points where p itself (nearly)
/// vanishes are kept as even-multiplicity roots.
struct Poly {
  std::vector<double> c;

  double eval(double x) const;
  Poly derivative() const;
  /// Index of the last coefficient above relative noise; -1 for the zero polynomial.
  int degree() const;
  /// Bound on the magnitude of every root (Cauchy bound on the effective degree).
  double cauchy_bound() const;

  static Poly from_coeffs(std::vector<double> ascending) { return Poly{std::move(ascending)}; }
};

Poly operator*(const Poly& a, const Poly& b);
Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(double s, const Poly& a);

/// All real roots in ascending order, deduplicated.
std::vector<double> poly_real_roots(const Poly& p);

}  // namespace cbflab
