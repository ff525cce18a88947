#include "vicert/verification.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "vicert/error.hpp"

namespace vicert {
namespace {

// Axis samples lower + k h, k = 0..K, the last one clamped to upper.
std::vector<double> axis_points(double lower, double upper, double h) {
  const double span = upper - lower;
  const auto steps = static_cast<std::int64_t>(std::ceil(span / h - 1e-9));
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(steps) + 1);
  for (std::int64_t k = 0; k <= steps; ++k) {
    pts.push_back(std::min(lower + static_cast<double>(k) * h, upper));
  }
  return pts;
}

std::int64_t simplex_divisions(double h) {
  return std::max<std::int64_t>(1, std::llround(1.0 / h));
}

// Number of compositions of `total` into `parts` nonnegative parts, as a
// double so the guard cannot overflow.
double composition_count(std::int64_t total, std::int64_t parts) {
  double c = 1.0;
  for (std::int64_t i = 1; i < parts; ++i) {
    c *= static_cast<double>(total + i) / static_cast<double>(i);
  }
  return std::round(c);
}

void enumerate_simplex(std::int64_t remaining, Eigen::Index index, double scale,
                       Vector& current, std::vector<Vector>& out) {
  if (index == current.size() - 1) {
    current[index] = static_cast<double>(remaining) * scale;
    out.push_back(current);
    return;
  }
  for (std::int64_t k = 0; k <= remaining; ++k) {
    current[index] = static_cast<double>(k) * scale;
    enumerate_simplex(remaining - k, index + 1, scale, current, out);
  }
}

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

VerificationReport precondition_violated(std::string property, std::string note) {
  VerificationReport r;
  r.property = std::move(property);
  r.status = ReportStatus::kPreconditionViolated;
  r.note = std::move(note);
  return r;
}

}  // namespace

BruteForceGrid::BruteForceGrid(ConvexSet set, double spacing, double vi_tolerance)
    : set_(std::move(set)), spacing_(spacing), vi_tolerance_(vi_tolerance) {
  if (!std::holds_alternative<Box>(set_.shape()) &&
      !std::holds_alternative<Simplex>(set_.shape())) {
    throw ValidationError(std::string("brute-force grid supports box and simplex sets, not ") +
                          set_.kind());
  }
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
    throw ValidationError("grid spacing must be positive");
  }
  if (!(vi_tolerance_ > 0.0)) throw ValidationError("grid VI tolerance must be positive");
  if (set_.dim() > kMaxDim) {
    throw ValidationError("brute-force grid limited to dimension <= " + std::to_string(kMaxDim));
  }
  double count = 1.0;
  if (const auto* box = std::get_if<Box>(&set_.shape())) {
    for (Eigen::Index i = 0; i < box->lower.size(); ++i) {
      count *= std::ceil((box->upper[i] - box->lower[i]) / spacing_ - 1e-9) + 1.0;
    }
  } else {
    count = composition_count(simplex_divisions(spacing_), set_.dim());
  }
  if (count > static_cast<double>(kMaxPoints)) {
    throw ValidationError("grid overflow guard: more than " + std::to_string(kMaxPoints) +
                          " points");
  }
}

std::int64_t BruteForceGrid::point_count() const {
  if (const auto* box = std::get_if<Box>(&set_.shape())) {
    std::int64_t count = 1;
    for (Eigen::Index i = 0; i < box->lower.size(); ++i) {
      count *= static_cast<std::int64_t>(
          axis_points(box->lower[i], box->upper[i], spacing_).size());
    }
    return count;
  }
  return static_cast<std::int64_t>(composition_count(simplex_divisions(spacing_), dim()));
}

std::vector<Vector> BruteForceGrid::points() const {
  std::vector<Vector> out;
  const Eigen::Index n = dim();
  if (const auto* box = std::get_if<Box>(&set_.shape())) {
    std::vector<std::vector<double>> axes;
    for (Eigen::Index i = 0; i < n; ++i) {
      axes.push_back(axis_points(box->lower[i], box->upper[i], spacing_));
    }
    out.reserve(static_cast<std::size_t>(point_count()));
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      Vector p(n);
      for (Eigen::Index i = 0; i < n; ++i) p[i] = axes[i][idx[i]];
      out.push_back(std::move(p));
      // Odometer increment, last axis fastest.
      Eigen::Index i = n - 1;
      while (i >= 0 && ++idx[i] == axes[i].size()) {
        idx[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
    return out;
  }
  const std::int64_t divisions = simplex_divisions(spacing_);
  Vector current(n);
  enumerate_simplex(divisions, 0, 1.0 / static_cast<double>(divisions), current, out);
  return out;
}

std::vector<Vector> brute_force_vi(const AffineOperator& op, const BruteForceGrid& grid) {
  if (grid.dim() != op.dim()) throw DimensionError("brute_force_vi", op.dim(), grid.dim());
  const std::vector<Vector> pts = grid.points();
  Matrix flat(op.dim(), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) flat.col(static_cast<Eigen::Index>(k)) = pts[k];

  std::vector<Vector> solutions;
  const double tol = grid.vi_tolerance();
  for (const auto& x : pts) {
    const Vector g = op(x);
    const double gx = g.dot(x);
    bool solves = true;
    for (Eigen::Index k = 0; k < flat.cols(); ++k) {
      if (g.dot(flat.col(k)) - gx < -tol) {
        solves = false;
        break;
      }
    }
    if (solves) solutions.push_back(x);
  }
  return solutions;
}

VerificationReport check_singleton_vi(const AffineOperator& op, const BruteForceGrid& grid) {
  const std::vector<Vector> sol = brute_force_vi(op, grid);
  VerificationReport r;
  r.property = "singleton_vi";
  r.samples_used = grid.point_count();
  const double limit = 2.0 * grid.spacing() * std::sqrt(static_cast<double>(grid.dim()));
  if (sol.empty()) {
    r.status = ReportStatus::kFail;
    r.max_violation = std::numeric_limits<double>::infinity();
    r.note = "VI(C,A) empty at this resolution";
    return r;
  }
  double diameter = 0.0;
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    for (std::size_t j = i + 1; j < sol.size(); ++j) {
      const double d = (sol[i] - sol[j]).norm();
      if (d > diameter) {
        diameter = d;
        best_i = i;
        best_j = j;
      }
    }
  }
  r.max_violation = diameter - limit - kInequalityTol;
  if (r.max_violation > 0.0) {
    r.status = ReportStatus::kFail;
    r.witness = PointPair{sol[best_i], sol[best_j]};
  }
  r.note = std::to_string(sol.size()) + " grid solutions, diameter " + std::to_string(diameter);
  return r;
}

LemmaOutcome lemma_cocoercive_expansive(const AffineOperator& op, double m, double v,
                                        double eps, std::span<const PointPair> pairs) {
  if (!(m >= 0.0) || !std::isfinite(v) || !(eps > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "lemma_cocoercive_expansive: requires m >= 0, finite v, eps > 0");
  }
  LemmaOutcome out;
  out.gamma = v - m * eps * eps;
  if (!(out.gamma > 0.0)) {
    out.report = precondition_violated("lemma_cocoercive_expansive",
                                       "v - m eps^2 = " + std::to_string(out.gamma) +
                                           " is not positive");
    return out;
  }
  require_pairs(op, pairs, "lemma_cocoercive_expansive");

  // Hypotheses on the sample: relaxed (m, v)-cocoercive and eps-Lipschitz.
  for (const auto& pair : pairs) {
    const Vector d = op(pair.first) - op(pair.second);
    const Vector z = pair.first - pair.second;
    const double coco = -m * d.squaredNorm() + v * z.squaredNorm() - d.dot(z);
    const double lip = d.norm() - eps * z.norm();
    if (coco > kInequalityTol || lip > kInequalityTol) {
      out.report = precondition_violated(
          "lemma_cocoercive_expansive",
          coco > kInequalityTol ? "operator is not relaxed (m, v)-cocoercive on the sample"
                                : "operator is not eps-Lipschitz on the sample");
      return out;
    }
  }

  detail::ReportBuilder builder("lemma_cocoercive_expansive");
  for (const auto& pair : pairs) {
    const Vector d = op(pair.first) - op(pair.second);
    const Vector z = pair.first - pair.second;
    const double chain = out.gamma * z.squaredNorm() - d.dot(z);
    const double expansion = out.gamma * z.norm() - d.norm();
    builder.observe(pair, std::max(chain, expansion));
  }
  out.report = std::move(builder).finish();
  out.report.note = "gamma = v - m eps^2 = " + std::to_string(out.gamma);
  return out;
}

VerificationReport check_monotone_chain(const AffineOperator& op, double m, double v,
                                        double eps, std::span<const PointPair> pairs) {
  if (!(m >= 0.0) || !(eps >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "check_monotone_chain: requires m >= 0, eps >= 0");
  }
  require_pairs(op, pairs, "check_monotone_chain");
  detail::ReportBuilder builder("monotone_chain");
  for (const auto& pair : pairs) {
    const Vector d = op(pair.first) - op(pair.second);
    const Vector z = pair.first - pair.second;
    const double inner = d.dot(z);
    builder.observe(pair, std::max(-m * d.squaredNorm() + v * z.squaredNorm() - inner, -inner));
  }
  VerificationReport r = std::move(builder).finish();
  r.note = "eps = " + std::to_string(eps);
  return r;
}

VerificationReport lemma_ism_singleton(const AffineOperator& op, double alpha,
                                       const BruteForceGrid& grid,
                                       std::span<const PointPair> pairs) {
  const VerificationReport ism = check_ism(op, alpha, pairs);
  if (!ism.passed()) {
    VerificationReport r = precondition_violated(
        "lemma_ism_singleton", "operator is not alpha-inverse-strongly monotone on the sample");
    r.samples_used = ism.samples_used;
    return r;
  }
  const double gamma = certify_moduli(op).expansiveness;
  if (!(gamma > 0.0)) {
    return precondition_violated("lemma_ism_singleton",
                                 "operator is not gamma-expansive (sigma_min = 0)");
  }
  VerificationReport r = check_singleton_vi(op, grid);
  r.property = "lemma_ism_singleton";
  r.samples_used += ism.samples_used;
  return r;
}

PointPair minimal_expansion_pair(const AffineOperator& op) {
  return {min_singular_direction(op), Vector::Zero(op.dim())};
}

double sampled_vi_gap(const AffineOperator& op, const ConvexSet& set, const Vector& x,
                      std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::kInvalidArgument, "sampled_vi_gap: samples must be >= 1");
  std::mt19937_64 rng(seed);
  const Vector g = op(x);
  double gap = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 0; k < samples; ++k) {
    gap = std::min(gap, g.dot(sample_point(set, rng) - x));
  }
  return gap;
}

}  // namespace vicert
