#pragma once

#include <span>
#include <vector>

#include "vicert/geometry.hpp"
#include "vicert/operators.hpp"
#include "vicert/report.hpp"

namespace vicert {

/// Finite grid over a Box or Simplex used as a brute-force VI oracle.
///
/// Box axes are sampled at lower + k h, always including the upper bound.
/// Simplex points have coordinates that are multiples of 1 / round(1 / h).
class BruteForceGrid {
 public:
  static constexpr std::int64_t kMaxPoints = 10'000'000;
  static constexpr Eigen::Index kMaxDim = 3;

  /// Throws ValidationError for other set variants, h <= 0, a non-positive
  /// tolerance, dim > 3 or more than kMaxPoints grid points.
  BruteForceGrid(ConvexSet set, double spacing, double vi_tolerance = 1e-9);

  const ConvexSet& set() const { return set_; }
  double spacing() const { return spacing_; }
  double vi_tolerance() const { return vi_tolerance_; }
  Eigen::Index dim() const { return set_.dim(); }

  /// All grid points in lexicographic order.
  std::vector<Vector> points() const;
  std::int64_t point_count() const;

 private:
  ConvexSet set_;
  double spacing_;
  double vi_tolerance_;
};

/// Grid points x with min over grid y of <Ax, y - x> >= -vi_tolerance,
/// sorted lexicographically.
std::vector<Vector> brute_force_vi(const AffineOperator& op,
                                   const BruteForceGrid& grid);

/// Pass iff the brute-force solution set is nonempty with diameter
/// <= 2 h sqrt(n). The witness is a maximally separated pair.
VerificationReport check_singleton_vi(const AffineOperator& op,
                                      const BruteForceGrid& grid);

struct LemmaOutcome {
  double gamma = 0.0;  // v - m eps^2
  VerificationReport report;
};

/// Executable form of the relaxed-cocoercive lemma: with gamma = v - m eps^2
/// > 0 checks both <Ax-Ay, x-y> >= gamma ||x-y||^2 and ||Ax-Ay|| >=
/// gamma ||x-y||. Returns PreconditionViolated when gamma <= 0 or when the
/// sample contradicts the (m, v)-cocoercive or eps-Lipschitz hypothesis.
LemmaOutcome lemma_cocoercive_expansive(const AffineOperator& op, double m,
                                        double v, double eps,
                                        std::span<const PointPair> pairs);

/// <Ax-Ay, x-y> >= -m ||Ax-Ay||^2 + v ||x-y||^2 and <Ax-Ay, x-y> >= 0.
VerificationReport check_monotone_chain(const AffineOperator& op, double m,
                                        double v, double eps,
                                        std::span<const PointPair> pairs);

/// Executable form of the inverse-strongly-monotone lemma: if check_ism(alpha)
/// passes and sigma_min(M) > 0, the VI must be a singleton on the grid.
/// Returns PreconditionViolated when either hypothesis fails.
VerificationReport lemma_ism_singleton(const AffineOperator& op, double alpha,
                                       const BruteForceGrid& grid,
                                       std::span<const PointPair> pairs);

/// The pair (v_min, 0) along the minimal right singular vector, scaled to
/// unit length. Every gamma above sigma_min fails check_expansive on it.
PointPair minimal_expansion_pair(const AffineOperator& op);

/// min over the sampled y of <Ax, y - x>, y drawn with sample_point.
double sampled_vi_gap(const AffineOperator& op, const ConvexSet& set,
                      const Vector& x, std::int64_t samples,
                      std::uint64_t seed);

}  // namespace vicert
