#include <cmath>
#include <limits>
#include <random>

#include "vicert/report.hpp"
#include "vicert/types.hpp"

namespace vicert {

std::vector<PointPair> sample_pairs(Eigen::Index dim, std::int64_t count,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-kSampleHalfWidth,
                                               kSampleHalfWidth);
  std::vector<PointPair> pairs;
  pairs.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    Vector x(dim), y(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x[i] = coord(rng);
    for (Eigen::Index i = 0; i < dim; ++i) y[i] = coord(rng);
    pairs.emplace_back(std::move(x), std::move(y));
  }
  return pairs;
}

bool all_finite(const Vector& v) { return v.allFinite(); }

std::string_view to_string(ReportStatus status) {
  switch (status) {
    case ReportStatus::kPass:
      return "Pass";
    case ReportStatus::kFail:
      return "Fail";
    case ReportStatus::kPreconditionViolated:
      return "PreconditionViolated";
  }
  return "unknown";
}

namespace detail {

ReportBuilder::ReportBuilder(std::string property) {
  report_.property = std::move(property);
}

void ReportBuilder::observe(const PointPair& pair, double deficit) {
  ++report_.samples_used;
  // NaN slack counts as a violation.
  const double excess = std::isnan(deficit)
                            ? std::numeric_limits<double>::infinity()
                            : deficit - kInequalityTol;
  if (!any_sample_ || excess > report_.max_violation) {
    report_.max_violation = excess;
  }
  any_sample_ = true;
  if (excess > 0.0 && !report_.witness) report_.witness = pair;
}

VerificationReport ReportBuilder::finish() && {
  report_.status =
      report_.witness ? ReportStatus::kFail : ReportStatus::kPass;
  return std::move(report_);
}

}  // namespace detail

}  // namespace vicert
