#include "cbflab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cbflab {

namespace {

constexpr double kCoeffNoise = 1e-14;  // relative cutoff for the effective degree
constexpr double kValueTol = 1e-10;    // relative tolerance for "p vanishes here"

double max_abs_coeff(const std::vector<double>& c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

// Condition-aware magnitude scale of p at x: sum |c_i| |x|^i.
double value_scale(const Poly& p, double x) {
  double s = 0.0;
  double xp = 1.0;
  for (double v : p.c) {
    s += std::abs(v) * xp;
    xp *= std::abs(x);
  }
  return std::max(s, std::numeric_limits<double>::min());
}

// Bisection for a certified sign change on [lo, hi], then a few guarded
// Newton steps that are only kept while they stay inside the bracket.
double refine_root(const Poly& p, const Poly& dp, double lo, double hi, double flo) {
  double a = lo, b = hi, fa = flo;
  for (int i = 0; i < 200 && (b - a) > 1e-16 * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
    const double mid = 0.5 * (a + b);
    const double fm = p.eval(mid);
    if (fm == 0.0) return mid;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  double x = 0.5 * (a + b);
  for (int i = 0; i < 8; ++i) {
    const double f = p.eval(x);
    const double d = dp.eval(x);
    if (d == 0.0) break;
    const double step = f / d;
    const double xn = x - step;
    if (!(xn >= a && xn <= b)) break;
    x = xn;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace

double Poly::eval(double x) const {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

Poly Poly::derivative() const {
  Poly d;
  if (c.size() <= 1) {
    d.c = {0.0};
    return d;
  }
  d.c.resize(c.size() - 1);
  for (size_t i = 1; i < c.size(); ++i) d.c[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

int Poly::degree() const {
  const double cutoff = kCoeffNoise * max_abs_coeff(c);
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    if (std::abs(c[i]) > cutoff) return i;
  return -1;
}

double Poly::cauchy_bound() const {
  const int n = degree();
  if (n <= 0) return 1.0;
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, std::abs(c[i] / c[n]));
  return 1.0 + m;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-1.0 * b); }

Poly operator*(double s, const Poly& a) {
  Poly r = a;
  for (double& v : r.c) v *= s;
  return r;
}

std::vector<double> poly_real_roots(const Poly& p) {
  std::vector<double> roots;
  const int n = p.degree();
  if (n <= 0) return roots;

  if (n == 1) {
    roots.push_back(-p.c[0] / p.c[1]);
    return roots;
  }

  if (n == 2) {
    const double a = p.c[2], b = p.c[1], cc = p.c[0];
    const double disc = b * b - 4.0 * a * cc;
    const double disc_scale = b * b + 4.0 * std::abs(a * cc);
    if (disc < 0.0) {
      if (std::abs(disc) <= 1e-12 * std::max(1.0, disc_scale))
        roots.push_back(-b / (2.0 * a));  // tangent double root within noise
      return roots;
    }
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + ((b >= 0.0) ? sq : -sq));
    if (q != 0.0) {
      roots.push_back(q / a);
      roots.push_back(cc / q);
    } else {
      roots.push_back(0.0);
      roots.push_back(-b / a);
    }
    std::sort(roots.begin(), roots.end());
    if (roots.size() == 2 &&
        std::abs(roots[1] - roots[0]) <= 1e-14 * std::max(1.0, std::abs(roots[0])))
      roots.pop_back();
    return roots;
  }

  // Trim to the effective degree so the derivative recursion is honest.
  Poly q;
  q.c.assign(p.c.begin(), p.c.begin() + n + 1);
  const Poly dq = q.derivative();
  std::vector<double> crits = poly_real_roots(dq);

  const double bound = q.cauchy_bound();
  std::vector<double> nodes;
  nodes.push_back(-bound);
  for (double x : crits)
    if (x > -bound && x < bound) nodes.push_back(x);
  nodes.push_back(bound);
  std::sort(nodes.begin(), nodes.end());

  // Even-multiplicity roots sit at critical points where q itself vanishes.
  for (double x : crits) {
    if (std::abs(q.eval(x)) <= kValueTol * value_scale(q, x)) roots.push_back(x);
  }

  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double lo = nodes[i], hi = nodes[i + 1];
    if (hi - lo <= 0.0) continue;
    const double flo = q.eval(lo);
    const double fhi = q.eval(hi);
    if (std::abs(flo) <= kValueTol * value_scale(q, lo)) continue;  // node root handled above
    if (std::abs(fhi) <= kValueTol * value_scale(q, hi)) continue;
    if ((flo < 0.0) == (fhi < 0.0)) continue;
    roots.push_back(refine_root(q, dq, lo, hi, flo));
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (out.empty() || std::abs(r - out.back()) > 1e-12 * std::max(1.0, std::abs(r)))
      out.push_back(r);
  }
  return out;
}

}  // namespace cbflab
