#pragma once

#include <stdexcept>
#include <string>

#include "cbflab/linalg.hpp"

namespace cbflab {

enum class ErrorCode {
  NotStabilizable,
  RankDeficientB,
  OriginUnsafe,
  BadShapeMatrix,
  BadFilterConfig,
  BadDimensions,
  NonFinite,
  DegenerateGradient,
  WrongActuation,
  AssumptionViolated,
  NotEigenvector,
  ComplexSpectrum,
  RootFindingFailed,
  EigenvectorDegenerate,
  NotSaddle,
  UnsafeStart,
  WindowExcludesObstacle,
  NotEllipse,
  PreconditionViolated,
  ParseError,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Safe-set obstacle: circular (h = |x-c|^2 - r^2) or ellipsoidal
/// (h = (x-c)^T P (x-c) - 1 with P symmetric positive definite).
class Obstacle {
 public:
  enum class Kind { Circle, Ellipse };

  static Obstacle circle(const Vector2d& center, double radius);
  static Obstacle ellipse(const Vector2d& center, const Matrix2d& shape);

  Kind kind() const { return kind_; }
  bool is_circle() const { return kind_ == Kind::Circle; }
  const Vector2d& center() const { return center_; }
  double radius() const;           // circle only
  const Matrix2d& shape() const;   // ellipse only
  /// E with E symmetric positive definite and E*E = P (ellipse only).
  const Matrix2d& shape_sqrt() const;
  const Matrix2d& shape_sqrt_inv() const;

  double h(const Vector2d& x) const {
    const Vector2d d = x - center_;
    if (kind_ == Kind::Circle) return d.squaredNorm() - radius_ * radius_;
    return d.dot(shape_ * d) - 1.0;
  }

  Vector2d grad_h(const Vector2d& x) const {
    const Vector2d d = x - center_;
    if (kind_ == Kind::Circle) return 2.0 * d;
    return 2.0 * (shape_ * d);
  }

  Matrix2d hess_h() const {
    if (kind_ == Kind::Circle) return 2.0 * Matrix2d::Identity();
    return 2.0 * shape_;
  }

  /// Point of the boundary h = 0 at parameter theta in [0, 2pi).
  Vector2d boundary_point(double theta) const;
  /// Tangent direction d/dtheta of boundary_point (not normalized).
  Vector2d boundary_tangent(double theta) const;

  /// Circle radius, or the smallest semi-axis of the ellipse.
  double reference_radius() const;

  bool origin_strictly_safe() const { return h(Vector2d::Zero()) > 0.0; }

  /// Unit circle at the origin; placeholder only — analysis entry points
  /// take obstacles built by the validating factories.
  Obstacle() = default;

 private:
  Kind kind_ = Kind::Circle;
  Vector2d center_ = Vector2d::Zero();
  double radius_ = 1.0;
  Matrix2d shape_ = Matrix2d::Identity();
  Matrix2d shape_sqrt_ = Matrix2d::Identity();
  Matrix2d shape_sqrt_inv_ = Matrix2d::Identity();
};

/// xdot = A x + B u with nominal feedback u = -K x.
struct PlanarLTISystem {
  Matrix2d A = Matrix2d::Zero();
  MatrixXd B;  // 2 x m, m in {1, 2}, full column rank
  MatrixXd K;  // m x 2

  int input_dim() const { return static_cast<int>(B.cols()); }
  Matrix2d closed_loop() const { return A - B * K; }
};

/// Linear extended class-K slope; the weighting rule G = B^T B is implied.
struct FilterConfig {
  double alpha0 = 1.0;
};

struct ScenarioData {
  PlanarLTISystem system;
  Obstacle obstacle;
  FilterConfig config;
};

/// Scenario with every type invariant checked and derived quantities
/// cached: Atilde = A - B K, the weighting G, and D = B G^-1 B^T.
/// Immutable after construction; safe to share across threads.
class Scenario {
 public:
  const PlanarLTISystem& system() const { return data_.system; }
  const Obstacle& obstacle() const { return data_.obstacle; }
  const ScenarioData& data() const { return data_; }
  double alpha0() const { return data_.config.alpha0; }
  int input_dim() const { return m_; }

  const Matrix2d& atilde() const { return atilde_; }
  /// D = B G^-1 B^T (constant by construction).
  const Matrix2d& dmat() const { return dmat_; }
  const Matrix2d& bbt() const { return bbt_; }
  const MatrixXd& weighting() const { return g_; }
  const MatrixXd& weighting_inv() const { return g_inv_; }
  const EigenPair2& atilde_eigen() const { return eig_; }
  /// True when G was supplied explicitly instead of the B^T B rule.
  bool has_weighting_override() const { return weighting_override_; }

  friend Scenario validate_scenario(const PlanarLTISystem&, const Obstacle&, const FilterConfig&);
  friend Scenario validate_scenario_with_weighting(const PlanarLTISystem&, const Obstacle&,
                                                   const FilterConfig&, const MatrixXd&);

 private:
  Scenario() = default;
  static Scenario build(const PlanarLTISystem& system, const Obstacle& obstacle,
                        const FilterConfig& config, const MatrixXd* weighting);

  ScenarioData data_;
  int m_ = 0;
  Matrix2d atilde_ = Matrix2d::Zero();
  Matrix2d dmat_ = Matrix2d::Zero();
  Matrix2d bbt_ = Matrix2d::Zero();
  MatrixXd g_;
  MatrixXd g_inv_;
  EigenPair2 eig_;
  bool weighting_override_ = false;
};

/// Checks every type invariant (full-rank B, Hurwitz Atilde, safe origin,
/// positive alpha0, finite entries) and caches the derived matrices.
Scenario validate_scenario(const PlanarLTISystem& system, const Obstacle& obstacle,
                           const FilterConfig& config);
Scenario validate_scenario(const ScenarioData& data);

/// Same validation but with an explicit constant weighting G (used when a
/// transformed system carries the weighting of the system it came from).
Scenario validate_scenario_with_weighting(const PlanarLTISystem& system, const Obstacle& obstacle,
                                          const FilterConfig& config, const MatrixXd& weighting);

}  // namespace cbflab
