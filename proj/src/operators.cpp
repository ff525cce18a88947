#include "vicert/operators.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "vicert/error.hpp"

namespace vicert {
namespace {

void require_pairs(const AffineOperator& op, std::span<const PointPair> pairs,
                   std::string_view context) {
  if (pairs.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(context) + ": empty pair list (vacuous check refused)");
  }
  for (const auto& [x, y] : pairs) {
    if (x.size() != op.dim()) throw DimensionError(context, op.dim(), x.size());
    if (y.size() != op.dim()) throw DimensionError(context, op.dim(), y.size());
  }
}

// Differences (Ax - Ay, x - y) for one pair.
struct PairDelta {
  Vector image;
  Vector point;
};

PairDelta delta(const AffineOperator& op, const PointPair& pair) {
  return {op(pair.first) - op(pair.second), pair.first - pair.second};
}

}  // namespace

AffineOperator::AffineOperator(Matrix matrix, Vector offset)
    : matrix_(std::move(matrix)), offset_(std::move(offset)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw ValidationError("operator matrix must be square (got " +
                          std::to_string(matrix_.rows()) + "x" +
                          std::to_string(matrix_.cols()) + ")");
  }
  if (matrix_.rows() == 0) throw ValidationError("operator dimension must be positive");
  if (offset_.size() != matrix_.rows()) {
    throw DimensionError("operator offset", matrix_.rows(), offset_.size());
  }
  if (!matrix_.allFinite()) throw ValidationError("operator matrix has non-finite entries");
  if (!offset_.allFinite()) throw ValidationError("operator offset has non-finite entries");
}

Vector AffineOperator::operator()(const Vector& x) const {
  if (x.size() != dim()) throw DimensionError("evaluate", dim(), x.size());
  return matrix_ * x + offset_;
}

Vector evaluate(const AffineOperator& op, const Vector& x) { return op(x); }

OperatorModuli certify_moduli(const AffineOperator& op) {
  const Matrix& m = op.matrix();
  const Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sigma = svd.singularValues();  // descending
  const double sigma_max = sigma[0];
  double sigma_min = sigma[sigma.size() - 1];
  // Numerical rank deficiency: treat as exactly singular.
  const double floor = static_cast<double>(m.rows()) *
                       std::numeric_limits<double>::epsilon() * sigma_max;
  if (sigma_min <= floor) sigma_min = 0.0;

  const Matrix sym = 0.5 * (m + m.transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const double v = eig.eigenvalues()[0];

  OperatorModuli out;
  out.lipschitz = sigma_max;
  out.expansiveness = std::min(sigma_min, sigma_max);
  out.strong_monotonicity = v;
  if (v > 0.0) out.ism_alpha = v / (sigma_max * sigma_max);
  out.cocoercive_m = 0.0;
  out.cocoercive_v = v;
  return out;
}

double certify_cocoercive_v(const AffineOperator& op, double m) {
  if (!(m >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cocoercive relaxation m must be >= 0");
  }
  const Matrix& a = op.matrix();
  const Matrix form = 0.5 * (a + a.transpose()) + m * a.transpose() * a;
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(form, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()[0];
}

VerificationReport check_ism(const AffineOperator& op, double alpha,
                             std::span<const PointPair> pairs) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::kInvalidArgument, "check_ism: alpha must be > 0");
  require_pairs(op, pairs, "check_ism");
  detail::ReportBuilder builder("ism");
  for (const auto& pair : pairs) {
    const auto [d, z] = delta(op, pair);
    builder.observe(pair, alpha * d.squaredNorm() - d.dot(z));
  }
  return std::move(builder).finish();
}

VerificationReport check_relaxed_cocoercive(const AffineOperator& op, double u,
                                            double v,
                                            std::span<const PointPair> pairs) {
  if (!(u >= 0.0) || !(v > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "check_relaxed_cocoercive: requires u >= 0 and v > 0");
  }
  require_pairs(op, pairs, "check_relaxed_cocoercive");
  detail::ReportBuilder builder("relaxed_cocoercive");
  for (const auto& pair : pairs) {
    const auto [d, z] = delta(op, pair);
    builder.observe(pair, -u * d.squaredNorm() + v * z.squaredNorm() - d.dot(z));
  }
  return std::move(builder).finish();
}

VerificationReport check_expansive(const AffineOperator& op, double gamma,
                                   std::span<const PointPair> pairs) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "check_expansive: gamma must be > 0");
  }
  require_pairs(op, pairs, "check_expansive");
  detail::ReportBuilder builder("expansive");
  for (const auto& pair : pairs) {
    const auto [d, z] = delta(op, pair);
    builder.observe(pair, gamma * z.norm() - d.norm());
  }
  return std::move(builder).finish();
}

Vector min_singular_direction(const AffineOperator& op) {
  const Eigen::JacobiSVD<Matrix> svd(op.matrix(), Eigen::ComputeFullV);
  const Eigen::Index last = svd.singularValues().size() - 1;
  return svd.matrixV().col(last).normalized();
}

}  // namespace vicert
