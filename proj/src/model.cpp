#include "cbflab/model.hpp"

#include <cmath>

namespace cbflab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotStabilizable: return "NotStabilizable";
    case ErrorCode::RankDeficientB: return "RankDeficientB";
    case ErrorCode::OriginUnsafe: return "OriginUnsafe";
    case ErrorCode::BadShapeMatrix: return "BadShapeMatrix";
    case ErrorCode::BadFilterConfig: return "BadFilterConfig";
    case ErrorCode::BadDimensions: return "BadDimensions";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::WrongActuation: return "WrongActuation";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::NotEigenvector: return "NotEigenvector";
    case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorCode::RootFindingFailed: return "RootFindingFailed";
    case ErrorCode::EigenvectorDegenerate: return "EigenvectorDegenerate";
    case ErrorCode::NotSaddle: return "NotSaddle";
    case ErrorCode::UnsafeStart: return "UnsafeStart";
    case ErrorCode::WindowExcludesObstacle: return "WindowExcludesObstacle";
    case ErrorCode::NotEllipse: return "NotEllipse";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

bool all_finite(const MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j))) return false;
  return true;
}

constexpr double kSymmetryTol = 1e-12;
constexpr double kRankTol = 1e-12;  // relative: sigma_min > kRankTol * sigma_max

}  // namespace

Obstacle Obstacle::circle(const Vector2d& center, double radius) {
  if (!std::isfinite(radius) || !std::isfinite(center.x()) || !std::isfinite(center.y()))
    throw Error(ErrorCode::NonFinite, "circle parameters must be finite");
  if (!(radius > 0.0)) throw Error(ErrorCode::BadShapeMatrix, "circle radius must be positive");
  Obstacle o;
  o.kind_ = Kind::Circle;
  o.center_ = center;
  o.radius_ = radius;
  return o;
}

Obstacle Obstacle::ellipse(const Vector2d& center, const Matrix2d& shape) {
  if (!all_finite(shape) || !std::isfinite(center.x()) || !std::isfinite(center.y()))
    throw Error(ErrorCode::NonFinite, "ellipse parameters must be finite");
  const double scale = std::max(1.0, shape.cwiseAbs().maxCoeff());
  if (std::abs(shape(0, 1) - shape(1, 0)) > kSymmetryTol * scale)
    throw Error(ErrorCode::BadShapeMatrix, "shape matrix is not symmetric");
  Matrix2d p = 0.5 * (shape + shape.transpose());
  if (!(p.trace() > 0.0) || !(p.determinant() > 0.0))
    throw Error(ErrorCode::BadShapeMatrix, "shape matrix is not positive definite");
  Obstacle o;
  o.kind_ = Kind::Ellipse;
  o.center_ = center;
  o.shape_ = p;
  o.shape_sqrt_ = sqrt_spd2(p);
  o.shape_sqrt_inv_ = o.shape_sqrt_.inverse();
  return o;
}

double Obstacle::radius() const {
  if (kind_ != Kind::Circle)
    throw Error(ErrorCode::PreconditionViolated, "radius() requires a circular obstacle");
  return radius_;
}

const Matrix2d& Obstacle::shape() const {
  if (kind_ != Kind::Ellipse)
    throw Error(ErrorCode::PreconditionViolated, "shape() requires an ellipsoidal obstacle");
  return shape_;
}

const Matrix2d& Obstacle::shape_sqrt() const {
  if (kind_ != Kind::Ellipse)
    throw Error(ErrorCode::PreconditionViolated, "shape_sqrt() requires an ellipsoidal obstacle");
  return shape_sqrt_;
}

const Matrix2d& Obstacle::shape_sqrt_inv() const {
  if (kind_ != Kind::Ellipse)
    throw Error(ErrorCode::PreconditionViolated,
                "shape_sqrt_inv() requires an ellipsoidal obstacle");
  return shape_sqrt_inv_;
}

Vector2d Obstacle::boundary_point(double theta) const {
  const Vector2d u(std::cos(theta), std::sin(theta));
  if (kind_ == Kind::Circle) return center_ + radius_ * u;
  return center_ + shape_sqrt_inv_ * u;
}

Vector2d Obstacle::boundary_tangent(double theta) const {
  const Vector2d du(-std::sin(theta), std::cos(theta));
  if (kind_ == Kind::Circle) return radius_ * du;
  return shape_sqrt_inv_ * du;
}

double Obstacle::reference_radius() const {
  if (kind_ == Kind::Circle) return radius_;
  // Smallest semi-axis: 1 / sqrt(lambda_max(P)).
  EigenPair2 e = eigen2(shape_);
  return 1.0 / std::sqrt(e.lambda2.real());
}

Scenario Scenario::build(const PlanarLTISystem& system, const Obstacle& obstacle,
                         const FilterConfig& config, const MatrixXd* weighting) {
  if (system.B.rows() != 2 || (system.B.cols() != 1 && system.B.cols() != 2))
    throw Error(ErrorCode::BadDimensions, "B must be 2 x m with m in {1, 2}");
  const int m = system.input_dim();
  if (system.K.rows() != m || system.K.cols() != 2)
    throw Error(ErrorCode::BadDimensions, "K must be m x 2");
  if (!all_finite(system.A) || !all_finite(system.B) || !all_finite(system.K))
    throw Error(ErrorCode::NonFinite, "system matrices must be finite");
  if (!std::isfinite(config.alpha0) || !(config.alpha0 > 0.0))
    throw Error(ErrorCode::BadFilterConfig, "alpha0 must be a positive finite number");

  // Full column rank of B through its singular values.
  Eigen::JacobiSVD<MatrixXd> svd(system.B);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smax > 0.0) || smin <= kRankTol * smax)
    throw Error(ErrorCode::RankDeficientB, "B is rank deficient");

  Matrix2d atilde = system.closed_loop();
  if (!is_hurwitz2(atilde))
    throw Error(ErrorCode::NotStabilizable, "A - B K is not Hurwitz (trace < 0 and det > 0 required)");

  if (!obstacle.origin_strictly_safe())
    throw Error(ErrorCode::OriginUnsafe, "origin must lie strictly inside the safe set");

  MatrixXd g;
  if (weighting) {
    g = *weighting;
    if (g.rows() != m || g.cols() != m)
      throw Error(ErrorCode::BadDimensions, "weighting must be m x m");
    if (!all_finite(g)) throw Error(ErrorCode::NonFinite, "weighting must be finite");
    MatrixXd sym = 0.5 * (g + g.transpose());
    if ((g - sym).cwiseAbs().maxCoeff() > kSymmetryTol * std::max(1.0, g.cwiseAbs().maxCoeff()))
      throw Error(ErrorCode::BadFilterConfig, "weighting must be symmetric");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw Error(ErrorCode::BadFilterConfig, "weighting must be positive definite");
    g = sym;
  } else {
    g = system.B.transpose() * system.B;
  }

  Scenario s;
  s.data_ = ScenarioData{system, obstacle, config};
  s.m_ = m;
  s.atilde_ = atilde;
  s.g_ = g;
  s.g_inv_ = g.inverse();
  s.dmat_ = system.B * s.g_inv_ * system.B.transpose();
  s.bbt_ = system.B * system.B.transpose();
  s.eig_ = eigen2(atilde);
  s.weighting_override_ = (weighting != nullptr);
  return s;
}

Scenario validate_scenario(const PlanarLTISystem& system, const Obstacle& obstacle,
                           const FilterConfig& config) {
  return Scenario::build(system, obstacle, config, nullptr);
}

Scenario validate_scenario(const ScenarioData& data) {
  return validate_scenario(data.system, data.obstacle, data.config);
}

Scenario validate_scenario_with_weighting(const PlanarLTISystem& system, const Obstacle& obstacle,
                                          const FilterConfig& config, const MatrixXd& weighting) {
  return Scenario::build(system, obstacle, config, &weighting);
}

}  // namespace cbflab
