#include "cbflab/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "cbflab/assumptions.hpp"
#include "cbflab/filter.hpp"
#include "cbflab/poly.hpp"
#include "cbflab/reduction.hpp"

namespace cbflab {

const char* equilibrium_kind_name(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Saddle: return "Saddle";
    case EquilibriumKind::AsymptoticallyStable: return "AsymptoticallyStable";
    case EquilibriumKind::Degenerate: return "Degenerate";
    case EquilibriumKind::Unstable: return "Unstable";
  }
  return "Unknown";
}

const char* provenance_path_name(Provenance::Path path) {
  switch (path) {
    case Provenance::Path::UnderactuatedClosedForm: return "UnderactuatedClosedForm";
    case Provenance::Path::EigenvectorTableRow: return "EigenvectorTableRow";
    case Provenance::Path::GeneralDeltaRoot: return "GeneralDeltaRoot";
    case Provenance::Path::BruteForce: return "BruteForce";
  }
  return "Unknown";
}

const char* condition_tag_name(ConditionTag tag) {
  switch (tag) {
    case ConditionTag::Condition1: return "Condition1";
    case ConditionTag::Condition2: return "Condition2";
    case ConditionTag::Neither: return "Neither";
  }
  return "Unknown";
}

namespace {

constexpr double kEigenvectorSinTol = 1e-9;
constexpr double kDualPathSinBand = 1e-6;

Eigen::Matrix2d rot90() {
  Matrix2d r;
  r << 0.0, 1.0, -1.0, 0.0;
  return r;
}

// Newton refinement of the delta-free equilibrium system
//   cross(Atilde p, D grad_h(p)) = 0,  h(p) = 0
// on the original scenario frame. Keeps the input when the iteration does
// not reduce the residual.
Vector2d polish_equilibrium(const Scenario& sc, Vector2d p) {
  const Matrix2d r = rot90();
  const Matrix2d& at = sc.atilde();
  const Matrix2d dh = sc.dmat() * sc.obstacle().hess_h();
  auto residual = [&](const Vector2d& x) {
    const Vector2d u = at * x;
    const Vector2d w2 = sc.dmat() * sc.obstacle().grad_h(x);
    return std::hypot(cross2(u, w2), sc.obstacle().h(x));
  };
  double best = residual(p);
  Vector2d best_p = p;
  for (int it = 0; it < 6; ++it) {
    const Vector2d u = at * p;
    const Vector2d w2 = sc.dmat() * sc.obstacle().grad_h(p);
    Eigen::Vector2d phi(cross2(u, w2), sc.obstacle().h(p));
    // cross(a, b) = a^T R b with R the quarter-turn matrix.
    Matrix2d jac;
    jac.row(0) = w2.transpose() * r.transpose() * at + u.transpose() * r * dh;
    jac.row(1) = sc.obstacle().grad_h(p).transpose();
    const double det = jac.determinant();
    if (std::abs(det) < 1e-14 * std::max(1.0, jac.norm())) break;
    p -= jac.inverse() * phi;
    const double res = residual(p);
    if (res < best) {
      best = res;
      best_p = p;
    }
    if (res < 1e-15) break;
  }
  return best_p;
}

EquilibriumKind classify_from_jacobian(const Scenario& sc, const Matrix2d& jac) {
  const double tol = 1e-7 * sc.atilde().norm();
  const EigenPair2 e = eigen2(jac);
  const double re1 = e.lambda1.real();
  const double re2 = e.lambda2.real();
  if (std::abs(re1) <= tol || std::abs(re2) <= tol) return EquilibriumKind::Degenerate;
  if (re1 < 0.0 && re2 < 0.0) return EquilibriumKind::AsymptoticallyStable;
  if ((re1 > 0.0) != (re2 > 0.0)) return EquilibriumKind::Saddle;
  return EquilibriumKind::Unstable;
}

double condition_scale(const Scenario& sc, const Vector2d& p) {
  return std::max(1.0, sc.atilde().norm() * p.norm());
}

// Builds a full report at p: recomputes the indicator, re-checks the
// equilibrium condition (polishing once if it is off), and classifies.
EquilibriumReport finalize_report(const Scenario& sc, Vector2d p, const Provenance& prov) {
  double delta = indicator(sc, p);
  double scale = condition_scale(sc, p);
  if (equilibrium_residual(sc, p, delta) > 1e-10 * scale || std::abs(sc.obstacle().h(p)) > 1e-12) {
    p = polish_equilibrium(sc, p);
    delta = indicator(sc, p);
  }
  if (equilibrium_residual(sc, p, delta) > 1e-7 * scale || std::abs(sc.obstacle().h(p)) > 1e-9)
    throw Error(ErrorCode::RootFindingFailed, "candidate equilibrium failed the condition residual");
  EquilibriumReport rep;
  rep.location = p;
  rep.indicator = delta;
  rep.provenance = prov;
  rep.jacobian = jacobian_at_boundary(sc, p);
  const EigenPair2 e = eigen2(rep.jacobian);
  rep.eigenvalues[0] = e.lambda1;
  rep.eigenvalues[1] = e.lambda2;
  rep.kind = classify_from_jacobian(sc, rep.jacobian);
  return rep;
}

void sort_reports(std::vector<EquilibriumReport>& reports) {
  std::sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    if (a.location.x() != b.location.x()) return a.location.x() < b.location.x();
    return a.location.y() < b.location.y();
  });
}

void sort_potential(std::vector<PotentialEquilibrium>& pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    if (a.location.x() != b.location.x()) return a.location.x() < b.location.x();
    return a.location.y() < b.location.y();
  });
}

void dedupe_potential(std::vector<PotentialEquilibrium>& pts, double tol) {
  std::vector<PotentialEquilibrium> out;
  for (const auto& c : pts) {
    bool dup = false;
    for (const auto& kept : out)
      if ((kept.location - c.location).norm() <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(c);
  }
  pts = std::move(out);
}

// Intersections of the line {y0 + t n} with the circle |y| = radius.
// Returns 0, 1 (tangent within tolerance), or 2 parameter values.
std::vector<double> line_circle_params(const Vector2d& y0, const Vector2d& n, double radius) {
  const double b = y0.dot(n);
  const double c = y0.squaredNorm() - radius * radius;
  const double disc = b * b - c;
  const double tol = 1e-9 * (radius * radius + y0.squaredNorm() + b * b);
  std::vector<double> ts;
  if (disc > tol) {
    const double s = std::sqrt(disc);
    ts.push_back(-b - s);
    ts.push_back(-b + s);
  } else if (disc >= -tol) {
    ts.push_back(-b);
  }
  return ts;
}

// Solutions of the rank-1 system (meff - lambda I) y = rhs as a line,
// intersected with the circle |y| = radius. Empty when inconsistent.
// `consistency_tol` bounds the admissible relative component of rhs
// outside the range; callers re-verify every returned point.
std::vector<Vector2d> singular_chord(const Matrix2d& meff, double lambda, const Vector2d& rhs,
                                     double radius, double consistency_tol = 1e-6) {
  std::vector<Vector2d> out;
  const Matrix2d msing = meff - lambda * Matrix2d::Identity();
  Vector2d c0 = msing.col(0);
  Vector2d c1 = msing.col(1);
  Vector2d dir = (c0.norm() >= c1.norm()) ? c0 : c1;
  const double dn = dir.norm();
  if (dn <= 1e-13 * std::max(1.0, meff.norm())) return out;  // meff ~ lambda I: no rank-1 range
  dir /= dn;
  // Consistency: rhs must lie in the range span(dir).
  const Vector2d residual = rhs - dir * dir.dot(rhs);
  if (residual.norm() > consistency_tol * std::max(1e-12, rhs.norm())) return out;
  const Eigen::RowVector2d row = dir.transpose() * msing;
  const double rn2 = row.squaredNorm();
  if (rn2 <= 0.0) return out;
  const Vector2d y0 = row.transpose() * (dir.dot(rhs) / rn2);
  Vector2d null_dir(-row(1), row(0));
  null_dir.normalize();
  for (double t : line_circle_params(y0, null_dir, radius)) out.push_back(y0 + t * null_dir);
  return out;
}

}  // namespace

namespace detail {

CircleFormResult solve_circle_form(const Matrix2d& meff, const Vector2d& center, double radius) {
  CircleFormResult result;
  const Vector2d u = meff * center;
  if (u.norm() == 0.0) return result;

  const Vector2d a = adjugate2(meff) * u;
  const double tr = meff.trace();
  const double det = meff.determinant();

  // det(meff - 2 delta I) and |adj(meff - 2 delta I) u|^2 in delta.
  const Poly detp = Poly::from_coeffs({det, -2.0 * tr, 4.0});
  const Poly quad = Poly::from_coeffs({a.dot(a), -4.0 * a.dot(u), 4.0 * u.dot(u)});
  const Poly q = quad - (radius * radius) * (detp * detp);
  result.quartic_roots = poly_real_roots(q);

  const double res_scale = (1.0 + meff.norm()) * (center.norm() + radius + 1.0);
  const Matrix2d r90 = rot90();

  auto polish_point = [&](Vector2d p) {
    for (int it = 0; it < 8; ++it) {
      const Vector2d y = p - center;
      const Vector2d mp = meff * p;
      Eigen::Vector2d phi(cross2(mp, y), y.squaredNorm() - radius * radius);
      Matrix2d jac;
      jac.row(0) = y.transpose() * r90.transpose() * meff + mp.transpose() * r90;
      jac.row(1) = 2.0 * y.transpose();
      const double d = jac.determinant();
      if (std::abs(d) < 1e-14 * std::max(1.0, jac.norm())) break;
      const Vector2d step = jac.inverse() * phi;
      p -= step;
      if (step.norm() < 1e-15 * std::max(1.0, p.norm())) break;
    }
    return p;
  };

  std::vector<PotentialEquilibrium> points;
  // Polishes a candidate, re-derives its indicator by least squares, and
  // keeps it only when the full vector condition certifies.
  auto try_accept = [&](const Vector2d& p_raw) {
    const Vector2d p = polish_point(p_raw);
    const Vector2d y = p - center;
    const double yn2 = y.squaredNorm();
    if (yn2 <= 0.0) return false;
    const double delta = y.dot(meff * p) / (2.0 * yn2);
    if ((meff * p - 2.0 * delta * y).norm() > 1e-9 * res_scale) return false;
    if (std::abs(std::sqrt(yn2) - radius) > 1e-9 * (radius + 1.0)) return false;
    points.push_back({p, delta});
    return true;
  };

  // Singular indicator values first: a whole chord of boundary solutions
  // can share the indicator lambda / 2, which no root isolation in delta
  // alone can separate. The rank-1 consistency test admits nearby
  // configurations; polishing plus certification filters false positives.
  const EigenPair2 spectrum = eigen2(meff);
  std::vector<double> pole_margins;
  std::vector<double> poles;
  if (spectrum.real_spectrum) {
    poles.push_back(spectrum.lambda1.real() / 2.0);
    if (!spectrum.repeated) poles.push_back(spectrum.lambda2.real() / 2.0);
    for (double pole : poles) {
      pole_margins.push_back(1e-4 * (1.0 + std::abs(pole)));
      for (const Vector2d& y : singular_chord(meff, 2.0 * pole, -u, radius, 1e-4))
        try_accept(center + y);
    }
  }

  for (double delta : result.quartic_roots) {
    bool near_pole = false;
    for (size_t i = 0; i < poles.size(); ++i)
      if (std::abs(delta - poles[i]) <= pole_margins[i]) near_pole = true;
    if (near_pole) continue;  // covered by the singular branch above

    const double detv = detp.eval(delta);
    const double det_scale = std::abs(det) + std::abs(2.0 * tr * delta) + 4.0 * delta * delta;
    if (std::abs(detv) <= 1e-11 * std::max(1.0, det_scale)) continue;
    const Vector2d y = -(a - 2.0 * delta * u) / detv;
    if (try_accept(center + y)) continue;
    // A bracketed sign change certifies a genuine root; losing one is an
    // error. Tolerance-resurrected critical points may fail harmlessly.
    const double h = 1e-6 * (1.0 + std::abs(delta));
    if ((q.eval(delta - h) < 0.0) != (q.eval(delta + h) < 0.0))
      throw Error(ErrorCode::RootFindingFailed, "bracketed constraint root failed to certify");
  }

  dedupe_potential(points, 1e-7 * (radius + center.norm() + 1.0));
  sort_potential(points);
  result.points = std::move(points);
  return result;
}

std::vector<PotentialEquilibrium> underactuated_candidates(const Scenario& sc) {
  if (sc.input_dim() != 1)
    throw Error(ErrorCode::WrongActuation, "single-input branch requires m = 1");
  if (!sc.obstacle().is_circle())
    throw Error(ErrorCode::PreconditionViolated, "single-input candidates require a circle");
  const Vector2d b = sc.system().B.col(0);
  const double beta = underactuated_beta(sc.atilde(), b);
  const double gamma = underactuated_gamma(sc.atilde(), b);
  const Vector2d xc = sc.obstacle().center();
  const double r = sc.obstacle().radius();
  const double gb2 = gamma * gamma + beta * beta;
  const double t3 = beta * xc.x() - gamma * xc.y();
  const double disc = r * r * gb2 - t3 * t3;
  std::vector<PotentialEquilibrium> out;
  if (gb2 <= 0.0 || disc < 0.0) return out;
  const double axis = gamma * xc.x() + beta * xc.y();
  const double sq = std::sqrt(disc);
  for (double z : {(axis - sq) / gb2, (axis + sq) / gb2}) {
    const Vector2d p(gamma * z, beta * z);
    out.push_back({p, indicator(sc, p)});
  }
  return out;
}

}  // namespace detail

EquilibriumKind classify(const Scenario& scenario, const Vector2d& location, double delta) {
  const double scale = condition_scale(scenario, location);
  if (equilibrium_residual(scenario, location, delta) > 1e-6 * scale)
    throw Error(ErrorCode::PreconditionViolated, "location does not satisfy the equilibrium condition");
  return classify_from_jacobian(scenario, jacobian_at_boundary(scenario, location));
}

namespace {

EquilibriaResult underactuated_analyze(const Scenario& sc) {
  EquilibriaResult result;
  result.diagnosis.actuation = CaseDiagnosis::Actuation::Underactuated;

  if (!sc.obstacle().is_circle()) {
    // Ellipsoidal obstacle: the single-input field is weighting-free, so
    // the reduced circular scenario has exactly conjugate dynamics.
    ReducedScenario red = reduce(sc);
    EquilibriaResult hat = underactuated_analyze(red.fixed_rule);
    const Matrix2d einv = sc.obstacle().shape_sqrt_inv();
    result.diagnosis = hat.diagnosis;
    result.diagnosis.potential.clear();
    result.diagnosis.delta_roots.clear();
    for (const auto& cand : hat.diagnosis.potential) {
      const Vector2d p = einv * cand.location;
      PotentialEquilibrium mapped{p, indicator(sc, p)};
      result.diagnosis.potential.push_back(mapped);
      result.diagnosis.delta_roots.push_back(mapped.indicator);
    }
    for (const auto& rep : hat.reports) {
      result.reports.push_back(
          finalize_report(sc, einv * rep.location, rep.provenance));
    }
    sort_reports(result.reports);
    return result;
  }

  AssumptionReport checks = check_assumptions(sc.data());
  if (!checks.all_hold())
    throw Error(ErrorCode::AssumptionViolated,
                "origin-interior, stabilizability, or feasibility check failed");

  const Vector2d b = sc.system().B.col(0);
  const double beta = underactuated_beta(sc.atilde(), b);
  const double gamma = underactuated_gamma(sc.atilde(), b);
  const Vector2d xc = sc.obstacle().center();
  const double axis = gamma * xc.x() + beta * xc.y();

  std::vector<PotentialEquilibrium> cands = detail::underactuated_candidates(sc);
  if (cands.size() != 2)
    throw Error(ErrorCode::RootFindingFailed, "expected two boundary candidates on the input axis");

  // axis > 0 selects p_-, axis < 0 selects p_+; candidates are ordered by z.
  const PotentialEquilibrium& selected = (axis > 0.0) ? cands[0] : cands[1];
  Provenance prov{Provenance::Path::UnderactuatedClosedForm, 0};
  result.reports.push_back(finalize_report(sc, selected.location, prov));
  for (const auto& c : cands) {
    result.diagnosis.potential.push_back(c);
    result.diagnosis.delta_roots.push_back(c.indicator);
  }
  return result;
}

struct EigenvectorAlignment {
  bool real_spectrum = false;
  double sin_best = 1.0;
  double lambda_i = 0.0;  // eigenvalue whose direction matches the center
  double lambda_j = 0.0;  // the other eigenvalue (diagonalizable case)
  Vector2d vj = Vector2d::Zero();
  bool defective = false;
  bool repeated_scalar = false;  // Atilde ~ lambda I
};

EigenvectorAlignment center_alignment(const Scenario& sc) {
  EigenvectorAlignment al;
  const EigenPair2& e = sc.atilde_eigen();
  al.real_spectrum = e.real_spectrum;
  if (!e.real_spectrum) return al;
  const Vector2d xc = sc.obstacle().center();
  if (e.repeated && e.diagonalizable) {
    al.repeated_scalar = true;
    al.sin_best = 0.0;  // every direction is an eigendirection
    al.lambda_i = e.lambda1.real();
    al.lambda_j = e.lambda1.real();
    return al;
  }
  if (e.repeated && !e.diagonalizable) {
    al.defective = true;
    al.sin_best = sin_angle_to_line(xc, e.v1);
    al.lambda_i = e.lambda1.real();
    al.lambda_j = e.lambda1.real();
    return al;
  }
  const double s1 = sin_angle_to_line(xc, e.v1);
  const double s2 = sin_angle_to_line(xc, e.v2);
  if (s1 <= s2) {
    al.sin_best = s1;
    al.lambda_i = e.lambda1.real();
    al.lambda_j = e.lambda2.real();
    al.vj = e.v2;
  } else {
    al.sin_best = s2;
    al.lambda_i = e.lambda2.real();
    al.lambda_j = e.lambda1.real();
    al.vj = e.v1;
  }
  return al;
}

EquilibriaResult eigenvector_case_impl(const Scenario& sc, double sin_tol) {
  if (sc.input_dim() != 2)
    throw Error(ErrorCode::WrongActuation, "eigenvector branch requires invertible B");
  if (!sc.obstacle().is_circle())
    throw Error(ErrorCode::PreconditionViolated, "eigenvector branch requires a circular obstacle");
  const EigenvectorAlignment al = center_alignment(sc);
  if (!al.real_spectrum)
    throw Error(ErrorCode::ComplexSpectrum, "Atilde has non-real eigenvalues");
  if (al.sin_best >= sin_tol)
    throw Error(ErrorCode::NotEigenvector, "obstacle center is not an eigenvector of Atilde");

  const Vector2d xc = sc.obstacle().center();
  const double c = xc.norm();
  const double r = sc.obstacle().radius();
  const Vector2d vi = xc / c;

  // On-axis candidates: the two crossings of the center line with the circle.
  std::vector<PotentialEquilibrium> cands;
  const double lam = al.lambda_i;
  cands.push_back({xc * (1.0 + r / c), lam * (1.0 + c / r) / 2.0});
  cands.push_back({xc * (1.0 - r / c), lam * (1.0 - c / r) / 2.0});
  const Vector2d p_far = cands[0].location;

  // Chord candidates at the singular indicator value.
  std::vector<PotentialEquilibrium> chord;
  if (al.defective) {
    for (const Vector2d& y : singular_chord(sc.atilde(), al.lambda_i, -(sc.atilde() * xc), r))
      chord.push_back({xc + y, al.lambda_i / 2.0});
  } else if (!al.repeated_scalar) {
    const double a = -al.lambda_i * c / (al.lambda_i - al.lambda_j);
    for (double b : line_circle_params(a * vi, al.vj, r))
      chord.push_back({xc + a * vi + b * al.vj, al.lambda_j / 2.0});
  }

  // Tangency diagnosis: a chord point landing on the far axis crossing is
  // the threshold-equality configuration.
  const double coincide_tol = 1e-7 * (c + r);
  int coincide = 0;
  for (const auto& ch : chord)
    if ((ch.location - p_far).norm() <= coincide_tol) ++coincide;

  EquilibriaResult result;
  result.diagnosis.actuation = CaseDiagnosis::Actuation::FullyActuated;
  result.diagnosis.xc_eigenvector = true;
  if (al.repeated_scalar) {
    // A scalar closed loop has no second eigendirection; the table rows
    // assume an independent eigenvector pair and do not apply.
    result.diagnosis.outside_paper_tables = true;
  } else if (coincide > 0) {
    result.diagnosis.condition12 =
        (chord.size() == 1) ? ConditionTag::Condition1 : ConditionTag::Condition2;
  } else {
    result.diagnosis.condition12 = ConditionTag::Neither;
    result.diagnosis.table_row = 1 + static_cast<int>(chord.size());
  }

  for (const auto& ch : chord) cands.push_back(ch);
  dedupe_potential(cands, coincide_tol);
  sort_potential(cands);

  Provenance prov{Provenance::Path::EigenvectorTableRow,
                  result.diagnosis.table_row.value_or(0)};
  for (const auto& cand : cands) {
    result.diagnosis.potential.push_back(cand);
    result.diagnosis.delta_roots.push_back(cand.indicator);
    if (cand.indicator < 0.0) result.reports.push_back(finalize_report(sc, cand.location, prov));
  }
  sort_reports(result.reports);
  return result;
}

EquilibriaResult general_case_impl(const Scenario& sc) {
  if (sc.input_dim() != 2)
    throw Error(ErrorCode::WrongActuation, "general branch requires invertible B");

  Matrix2d meff;
  Vector2d center;
  double radius;
  Matrix2d to_original = Matrix2d::Identity();
  bool ellipse = !sc.obstacle().is_circle();
  if (ellipse) {
    // Congruence q = E p turns Atilde p = 2 delta P (p - xc) into circle
    // form with matrix E^-1 Atilde E^-1 and unit radius.
    const Matrix2d& e = sc.obstacle().shape_sqrt();
    const Matrix2d& einv = sc.obstacle().shape_sqrt_inv();
    meff = einv * sc.atilde() * einv;
    center = e * sc.obstacle().center();
    radius = 1.0;
    to_original = einv;
  } else {
    meff = sc.atilde();
    center = sc.obstacle().center();
    radius = sc.obstacle().radius();
  }

  detail::CircleFormResult engine = detail::solve_circle_form(meff, center, radius);

  EquilibriaResult result;
  result.diagnosis.actuation = CaseDiagnosis::Actuation::FullyActuated;
  result.diagnosis.outside_paper_tables = ellipse || !sc.atilde_eigen().real_spectrum;
  Provenance prov{Provenance::Path::GeneralDeltaRoot, 0};
  for (const auto& cand : engine.points) {
    const Vector2d p = to_original * cand.location;
    PotentialEquilibrium mapped{p, indicator(sc, p)};
    result.diagnosis.potential.push_back(mapped);
    result.diagnosis.delta_roots.push_back(mapped.indicator);
    if (mapped.indicator < 0.0) result.reports.push_back(finalize_report(sc, p, prov));
  }
  sort_reports(result.reports);
  return result;
}

bool report_sets_match(const std::vector<EquilibriumReport>& a,
                       const std::vector<EquilibriumReport>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& ra : a) {
    bool found = false;
    for (size_t i = 0; i < b.size(); ++i) {
      if (!used[i] && (ra.location - b[i].location).norm() <= tol) {
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

EquilibriumReport underactuated_equilibrium(const Scenario& scenario) {
  EquilibriaResult result = underactuated_analyze(scenario);
  if (result.reports.size() != 1)
    throw Error(ErrorCode::RootFindingFailed, "expected exactly one undesirable equilibrium");
  return result.reports.front();
}

EquilibriaResult eigenvector_case(const Scenario& scenario) {
  return eigenvector_case_impl(scenario, kEigenvectorSinTol);
}

EquilibriaResult general_case(const Scenario& scenario) { return general_case_impl(scenario); }

EquilibriaResult analyze_equilibria(const Scenario& scenario) {
  if (scenario.input_dim() == 1) return underactuated_analyze(scenario);
  if (!scenario.obstacle().is_circle()) return general_case_impl(scenario);

  const EigenvectorAlignment al = center_alignment(scenario);
  if (!al.real_spectrum) return general_case_impl(scenario);

  if (al.sin_best < kEigenvectorSinTol) {
    EquilibriaResult result = eigenvector_case_impl(scenario, kEigenvectorSinTol);
    if (al.sin_best > 1e-12 && !al.repeated_scalar) {
      // Near the routing threshold from below: cross-check with the
      // quartic branch, which resolves the singular systems by consistency.
      result.diagnosis.dual_path_checked = true;
      try {
        EquilibriaResult alt = general_case_impl(scenario);
        result.diagnosis.dual_path_agree =
            report_sets_match(result.reports, alt.reports, 1e-5);
      } catch (const Error&) {
        result.diagnosis.dual_path_agree = false;
      }
    }
    return result;
  }

  EquilibriaResult result = general_case_impl(scenario);
  if (al.sin_best < kDualPathSinBand) {
    // Near the routing threshold from above: compare against the
    // eigenvector branch run with a relaxed alignment gate.
    result.diagnosis.dual_path_checked = true;
    try {
      EquilibriaResult alt = eigenvector_case_impl(scenario, kDualPathSinBand);
      result.diagnosis.dual_path_agree = report_sets_match(result.reports, alt.reports, 1e-5);
    } catch (const Error&) {
      result.diagnosis.dual_path_agree = false;
    }
  }
  return result;
}

SufficientConditionReport sufficient_conditions(const Scenario& scenario) {
  if (scenario.input_dim() != 2)
    throw Error(ErrorCode::WrongActuation, "sufficient conditions require invertible B");
  if (!scenario.obstacle().is_circle())
    throw Error(ErrorCode::PreconditionViolated, "sufficient conditions require a circular obstacle");
  const EigenPair2& e = scenario.atilde_eigen();
  if (!e.real_spectrum)
    throw Error(ErrorCode::ComplexSpectrum, "sufficient conditions require real eigenvalues");
  if (e.repeated)
    throw Error(ErrorCode::EigenvectorDegenerate, "sufficient conditions require lambda1 < lambda2");
  const EigenvectorAlignment al = center_alignment(scenario);
  if (al.sin_best < kEigenvectorSinTol)
    throw Error(ErrorCode::PreconditionViolated,
                "sufficient conditions require a non-eigenvector center");

  const double l1 = e.lambda1.real();
  const double l2 = e.lambda2.real();
  Vector2d v1 = e.v1;
  Vector2d v2 = e.v2;
  if (v1.dot(v2) < 0.0) v2 = -v2;
  const double dot = v1.dot(v2);

  Matrix2d basis;
  basis.col(0) = v1;
  basis.col(1) = v2;
  const Vector2d beta = basis.inverse() * scenario.obstacle().center();
  const double b1 = beta(0), b2 = beta(1);
  const double r = scenario.obstacle().radius();

  SufficientConditionReport rep;
  rep.sign_condition_i = (b1 * b1 + b1 * b2 * dot >= 0.0);
  rep.sign_condition_ii = (b1 * b2 * dot + b2 * b2 >= 0.0);

  const Poly lin1 = Poly::from_coeffs({l1, -2.0});
  const Poly lin2 = Poly::from_coeffs({l2, -2.0});
  const Poly f1 = (-r * r) * (lin1 * lin1 * lin2 * lin2) +
                  (l1 * b1 * l1 * b1) * (lin2 * lin2) + (l2 * b2 * l2 * b2) * (lin1 * lin1) +
                  (2.0 * l1 * b1 * l2 * b2 * dot) * (lin1 * lin2);

  const Poly df = f1.derivative();
  const double a3 = df.c.size() > 3 ? df.c[3] : 0.0;
  const double a2 = df.c.size() > 2 ? df.c[2] : 0.0;
  const double a1 = df.c.size() > 1 ? df.c[1] : 0.0;
  const double a0 = df.c.size() > 0 ? df.c[0] : 0.0;
  rep.cubic_discriminant = 18.0 * a3 * a2 * a1 * a0 - 4.0 * a2 * a2 * a2 * a0 +
                           a2 * a2 * a1 * a1 - 4.0 * a3 * a1 * a1 * a1 -
                           27.0 * a3 * a3 * a0 * a0;
  rep.single_real_critical_point = (a3 != 0.0 && rep.cubic_discriminant < 0.0);

  rep.claim_i_applies = rep.sign_condition_i;
  rep.claim_ii_applies = rep.sign_condition_ii;
  rep.claim_iii_applies = rep.single_real_critical_point && rep.sign_condition_i;

  EquilibriaResult found = general_case_impl(scenario);
  for (const auto& report : found.reports) {
    if (rep.claim_i_applies && report.indicator < l1 / 2.0 &&
        report.kind != EquilibriumKind::Saddle)
      rep.claim_i_consistent = false;
    if (rep.claim_ii_applies && report.indicator > l2 / 2.0 && report.indicator < 0.0 &&
        report.kind != EquilibriumKind::AsymptoticallyStable)
      rep.claim_ii_consistent = false;
  }
  if (rep.claim_iii_applies) {
    rep.claim_iii_consistent =
        (found.reports.size() == 1 && found.reports[0].kind == EquilibriumKind::Saddle);
  }

  for (double d : found.diagnosis.delta_roots) {
    double scale = 0.0;
    double xp = 1.0;
    for (double cv : f1.c) {
      scale += std::abs(cv) * xp;
      xp *= std::abs(d);
    }
    if (scale > 0.0) rep.max_f1_residual = std::max(rep.max_f1_residual, std::abs(f1.eval(d)) / scale);
  }
  return rep;
}

}  // namespace cbflab
