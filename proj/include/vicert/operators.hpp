#pragma once

#include <optional>
#include <span>

#include "vicert/report.hpp"
#include "vicert/types.hpp"

namespace vicert {

/// A(x) = M x + q on R^n.
class AffineOperator {
 public:
  /// Throws ValidationError on non-finite entries or a non-square matrix,
  /// DimensionError when q does not match M.
  AffineOperator(Matrix matrix, Vector offset);

  const Matrix& matrix() const { return matrix_; }
  const Vector& offset() const { return offset_; }
  Eigen::Index dim() const { return offset_.size(); }

  Vector operator()(const Vector& x) const;

 private:
  Matrix matrix_;
  Vector offset_;
};

/// Mx + q. Throws DimensionError naming the expected and actual length.
Vector evaluate(const AffineOperator& op, const Vector& x);

/// Analytically certified constants of an affine operator.
struct OperatorModuli {
  double lipschitz = 0.0;            // sigma_max(M)
  double strong_monotonicity = 0.0;  // lambda_min((M + M^T) / 2)
  std::optional<double> ism_alpha;   // v / eps^2, only when v > 0
  double expansiveness = 0.0;        // sigma_min(M), snapped to 0 when rank deficient
  double cocoercive_m = 0.0;         // relaxed (m, v_c) pair
  double cocoercive_v = 0.0;
};

OperatorModuli certify_moduli(const AffineOperator& op);

/// Tightest v_c such that the operator is relaxed (m, v_c)-cocoercive:
/// lambda_min(sym(M) + m M^T M). Requires m >= 0.
double certify_cocoercive_v(const AffineOperator& op, double m);

/// <Ax - Ay, x - y> >= alpha ||Ax - Ay||^2 on every pair.
VerificationReport check_ism(const AffineOperator& op, double alpha,
                             std::span<const PointPair> pairs);

/// <Ax - Ay, x - y> >= -u ||Ax - Ay||^2 + v ||x - y||^2 on every pair.
VerificationReport check_relaxed_cocoercive(const AffineOperator& op, double u,
                                            double v,
                                            std::span<const PointPair> pairs);

/// ||Ax - Ay|| >= gamma ||x - y|| on every pair.
VerificationReport check_expansive(const AffineOperator& op, double gamma,
                                   std::span<const PointPair> pairs);

/// Right singular vector of M for its smallest singular value (unit norm).
Vector min_singular_direction(const AffineOperator& op);

}  // namespace vicert
