#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace vicert {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// An ordered pair (x, y) on which a two-point inequality is evaluated.
using PointPair = std::pair<Vector, Vector>;

/// Additive slack allowed on every sampled inequality check.
inline constexpr double kInequalityTol = 1e-9;

/// Default number of sampled pairs and half-width of the sampling cube.
inline constexpr std::int64_t kDefaultPairCount = 10000;
inline constexpr double kSampleHalfWidth = 10.0;

/// Uniform pairs on [-10, 10]^dim, reproducible from `seed`.
std::vector<PointPair> sample_pairs(Eigen::Index dim, std::int64_t count,
                                    std::uint64_t seed);

bool all_finite(const Vector& v);

}  // namespace vicert
