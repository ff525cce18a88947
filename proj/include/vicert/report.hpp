#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "vicert/types.hpp"

namespace vicert {

enum class ReportStatus : std::uint8_t { kPass, kFail, kPreconditionViolated };

std::string_view to_string(ReportStatus status);

/// Outcome of a sampled or enumerated property check.
///
/// `max_violation` is the largest slack deficit beyond the additive
/// tolerance, so a report passes exactly when it is <= 0. A failing report
/// carries the first violating pair as witness, except for the
/// empty-solution-set case of the singleton check, which has only a note.
struct VerificationReport {
  std::string property;
  ReportStatus status = ReportStatus::kPass;
  std::optional<PointPair> witness;
  std::int64_t samples_used = 0;
  double max_violation = 0.0;
  std::optional<std::uint64_t> seed;
  std::string note;

  bool passed() const { return status == ReportStatus::kPass; }
};

namespace detail {

// Accumulates per-pair deficits into a report.
class ReportBuilder {
 public:
  explicit ReportBuilder(std::string property);

  void observe(const PointPair& pair, double deficit);
  VerificationReport finish() &&;

 private:
  VerificationReport report_;
  bool any_sample_ = false;
};

}  // namespace detail

}  // namespace vicert
