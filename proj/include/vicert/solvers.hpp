#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vicert/geometry.hpp"
#include "vicert/operators.hpp"
#include "vicert/types.hpp"

namespace vicert {

/// Anchor weights alpha_n of the Halpern step. Both rules satisfy
/// alpha_n -> 0 and sum alpha_n = inf.
struct AnchorSchedule {
  enum class Rule : std::uint8_t {
    kHarmonic,  // 1 / (n + offset)
    kPower,     // 1 / (n + 1)^exponent, exponent in (0, 1]
  };
  Rule rule = Rule::kHarmonic;
  double offset = 1.0;
  double exponent = 1.0;

  double weight(std::int64_t n) const;
};

struct IterationConfig {
  double step = 0.0;  // lambda
  AnchorSchedule anchor_schedule;
  std::int64_t max_iters = 1000;
  double residual_tol = 1e-8;
  std::uint64_t seed = 0;
  // Keep every k-th record (the last one is always kept).
  std::int64_t record_stride = 1;
};

/// Throws ConfigError unless lambda lies in (0, 2 alpha) for a certified ISM
/// modulus alpha, max_iters >= 1, residual_tol > 0 and record_stride >= 1.
void validate_config(const IterationConfig& cfg, const OperatorModuli& moduli);

struct IterationRecord {
  std::int64_t n = 0;
  Vector x;
  double natural_residual = 0.0;
  std::optional<double> operator_residual;
  std::optional<double> shortcut_bound;
  std::optional<double> distance;  // ||x_n - x_ref||
};

enum class TraceStatus : std::uint8_t { kConverged, kMaxIters };

struct IterationTrace {
  std::vector<IterationRecord> records;
  TraceStatus status = TraceStatus::kMaxIters;
  std::int64_t iterations = 0;  // index of the final iterate
  Vector final_x;
  double expansiveness = 0.0;  // gamma used for the shortcut column
  bool has_reference = false;
};

std::string_view to_string(TraceStatus status);

/// x -> x, x -> P_K(x), or x -> (1 - t) x + t c.
class NonexpansiveMap {
 public:
  struct Identity {};
  struct ProjectionOnto {
    ConvexSet set;
  };
  struct AffineAverage {
    double t = 0.0;
    Vector fixed_point;
  };
  using Variant = std::variant<Identity, ProjectionOnto, AffineAverage>;

  static NonexpansiveMap identity();
  static NonexpansiveMap projection(ConvexSet set);
  /// Throws ValidationError unless t is in [0, 1].
  static NonexpansiveMap affine_average(double t, Vector fixed_point);

  Vector operator()(const Vector& x) const;
  const Variant& shape() const { return shape_; }

 private:
  explicit NonexpansiveMap(Variant shape) : shape_(std::move(shape)) {}
  Variant shape_;
};

/// r(x) = ||x - P_C(x - lambda A x)||.
double natural_residual(const AffineOperator& op, const ConvexSet& set,
                        double step, const Vector& x);

/// x_{n+1} = P_C(x_n - lambda A x_n) until r_n <= tol or max_iters updates.
/// When x_ref is given the operator residual, shortcut bound and distance
/// columns are filled.
IterationTrace solve_projected_gradient(
    const AffineOperator& op, const ConvexSet& set, const IterationConfig& cfg,
    const Vector& x0, const std::optional<Vector>& x_ref = std::nullopt);

/// x_{n+1} = a_n u + (1 - a_n) S(P_C(x_n - lambda A x_n)), u the anchor.
IterationTrace solve_halpern(const AffineOperator& op, const ConvexSet& set,
                             const NonexpansiveMap& s,
                             const IterationConfig& cfg, const Vector& x0,
                             const Vector& anchor,
                             const std::optional<Vector>& x_ref = std::nullopt);

/// Upper bound on ||x_n - x*|| for a gamma-expansive operator:
/// ||A x_n - A x*|| / gamma. Throws ConfigError when gamma <= 0.
double shortcut_distance_bound(double gamma, double operator_residual);

struct StoppingComparison {
  double delta = 0.0;
  std::optional<std::int64_t> shortcut_n;  // first n with bound_n <= delta
  std::optional<std::int64_t> natural_n;   // first n with r_n <= delta
  IterationTrace trace;
};

/// Runs projected gradient until both criteria have fired (or max_iters).
/// Throws ConfigError("non-expansive operator") when sigma_min(M) = 0.
StoppingComparison compare_stopping(const AffineOperator& op,
                                    const ConvexSet& set,
                                    const IterationConfig& cfg,
                                    const Vector& x0, const Vector& x_star,
                                    double delta = 1e-6);

/// CSV with header n,r_n,s_n,bound_n[,dist_n]. Absent values are empty
/// fields; dist_n only appears when the trace has a reference point.
std::string trace_to_csv(const IterationTrace& trace);

}  // namespace vicert
