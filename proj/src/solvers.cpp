#include "vicert/solvers.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "vicert/error.hpp"

namespace vicert {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_dims(const AffineOperator& op, const ConvexSet& set,
                  const Vector& x0, const std::optional<Vector>& x_ref) {
  if (set.dim() != op.dim()) throw DimensionError("set", op.dim(), set.dim());
  if (x0.size() != op.dim()) throw DimensionError("x0", op.dim(), x0.size());
  if (x_ref && x_ref->size() != op.dim()) {
    throw DimensionError("reference point", op.dim(), x_ref->size());
  }
}

// Maps (n, x_n, P_C(x_n - lambda A x_n)) to x_{n+1}.
using StepRule = std::function<Vector(std::int64_t, const Vector&, const Vector&)>;
// Decides convergence from the latest record, x_n and the projected point.
using StopRule =
    std::function<bool(const IterationRecord&, const Vector&, const Vector&)>;

IterationTrace run_iteration(const AffineOperator& op, const ConvexSet& set,
                             const IterationConfig& cfg, const Vector& x0,
                             const std::optional<Vector>& x_ref,
                             const StepRule& step, const StopRule& stop) {
  const OperatorModuli moduli = certify_moduli(op);
  validate_config(cfg, moduli);
  require_dims(op, set, x0, x_ref);

  IterationTrace trace;
  trace.expansiveness = moduli.expansiveness;
  trace.has_reference = x_ref.has_value();
  const std::optional<Vector> ref_image =
      x_ref ? std::optional<Vector>(op(*x_ref)) : std::nullopt;

  Vector x = x0;
  for (std::int64_t n = 0;; ++n) {
    if (!x.allFinite()) throw DivergenceError(n);
    const Vector image = op(x);
    const Vector projected = project(set, x - cfg.step * image);
    if (!projected.allFinite()) throw DivergenceError(n);

    IterationRecord rec;
    rec.n = n;
    rec.natural_residual = (x - projected).norm();
    if (x_ref) {
      const double s = (image - *ref_image).norm();
      rec.operator_residual = s;
      if (moduli.expansiveness > 0.0) {
        rec.shortcut_bound = shortcut_distance_bound(moduli.expansiveness, s);
      }
      rec.distance = (x - *x_ref).norm();
    }

    const bool converged = stop(rec, x, projected);
    const bool last = converged || n >= cfg.max_iters;
    if (last || n % cfg.record_stride == 0) {
      rec.x = x;
      trace.records.push_back(std::move(rec));
    }
    if (last) {
      trace.status = converged ? TraceStatus::kConverged : TraceStatus::kMaxIters;
      trace.iterations = n;
      trace.final_x = x;
      return trace;
    }
    x = step(n, x, projected);
  }
}

void append_number(std::string& out, double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  out += buf;
}

void append_optional(std::string& out, const std::optional<double>& value) {
  if (value) append_number(out, *value);
}

}  // namespace

double AnchorSchedule::weight(std::int64_t n) const {
  const auto k = static_cast<double>(n);
  switch (rule) {
    case Rule::kHarmonic:
      return 1.0 / (k + offset);
    case Rule::kPower:
      return 1.0 / std::pow(k + 1.0, exponent);
  }
  return 0.0;
}

void validate_config(const IterationConfig& cfg, const OperatorModuli& moduli) {
  if (cfg.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(cfg.residual_tol > 0.0)) throw ConfigError("residual_tol must be > 0");
  if (cfg.record_stride < 1) throw ConfigError("record_stride must be >= 1");
  const auto& sched = cfg.anchor_schedule;
  if (sched.rule == AnchorSchedule::Rule::kHarmonic && !(sched.offset >= 1.0)) {
    throw ConfigError("harmonic anchor schedule needs offset >= 1");
  }
  if (sched.rule == AnchorSchedule::Rule::kPower &&
      !(sched.exponent > 0.0 && sched.exponent <= 1.0)) {
    throw ConfigError("power anchor schedule needs exponent in (0, 1]");
  }
  if (!moduli.ism_alpha) {
    throw ConfigError(
        "operator has no certified inverse-strong-monotonicity modulus; "
        "step range (0, 2 alpha) is undefined");
  }
  const double upper = 2.0 * *moduli.ism_alpha;
  if (!(cfg.step > 0.0 && cfg.step < upper)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "step lambda = %.17g outside (0, 2 alpha) = (0, %.17g)",
                  cfg.step, upper);
    throw ConfigError(buf);
  }
}

std::string_view to_string(TraceStatus status) {
  return status == TraceStatus::kConverged ? "Converged" : "MaxIters";
}

NonexpansiveMap NonexpansiveMap::identity() { return NonexpansiveMap(Identity{}); }

NonexpansiveMap NonexpansiveMap::projection(ConvexSet set) {
  return NonexpansiveMap(ProjectionOnto{std::move(set)});
}

NonexpansiveMap NonexpansiveMap::affine_average(double t, Vector fixed_point) {
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("affine average: t must lie in [0, 1]");
  if (!fixed_point.allFinite()) {
    throw ValidationError("affine average: fixed point has non-finite entries");
  }
  return NonexpansiveMap(AffineAverage{t, std::move(fixed_point)});
}

Vector NonexpansiveMap::operator()(const Vector& x) const {
  return std::visit(
      Overloaded{
          [&](const Identity&) -> Vector { return x; },
          [&](const ProjectionOnto& p) -> Vector { return project(p.set, x); },
          [&](const AffineAverage& a) -> Vector {
            if (x.size() != a.fixed_point.size()) {
              throw DimensionError("affine average", a.fixed_point.size(), x.size());
            }
            return (1.0 - a.t) * x + a.t * a.fixed_point;
          },
      },
      shape_);
}

double natural_residual(const AffineOperator& op, const ConvexSet& set,
                        double step, const Vector& x) {
  return (x - project(set, x - step * op(x))).norm();
}

IterationTrace solve_projected_gradient(const AffineOperator& op,
                                        const ConvexSet& set,
                                        const IterationConfig& cfg,
                                        const Vector& x0,
                                        const std::optional<Vector>& x_ref) {
  return run_iteration(
      op, set, cfg, x0, x_ref,
      [](std::int64_t, const Vector&, const Vector& projected) { return projected; },
      [&](const IterationRecord& rec, const Vector&, const Vector&) {
        return rec.natural_residual <= cfg.residual_tol;
      });
}

IterationTrace solve_halpern(const AffineOperator& op, const ConvexSet& set,
                             const NonexpansiveMap& s,
                             const IterationConfig& cfg, const Vector& x0,
                             const Vector& anchor,
                             const std::optional<Vector>& x_ref) {
  if (anchor.size() != op.dim()) throw DimensionError("anchor", op.dim(), anchor.size());
  return run_iteration(
      op, set, cfg, x0, x_ref,
      [&](std::int64_t n, const Vector&, const Vector& projected) -> Vector {
        const double a = cfg.anchor_schedule.weight(n);
        return a * anchor + (1.0 - a) * s(projected);
      },
      // Converged once x_n solves the VI and is fixed by S P_C(I - lambda A).
      [&](const IterationRecord& rec, const Vector& x, const Vector& projected) {
        if (rec.natural_residual > cfg.residual_tol) return false;
        return (x - s(projected)).norm() <= cfg.residual_tol;
      });
}

double shortcut_distance_bound(double gamma, double operator_residual) {
  if (!(gamma > 0.0)) throw ConfigError("shortcut bound requires gamma > 0");
  if (!(operator_residual >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "operator residual must be >= 0");
  }
  return operator_residual / gamma;
}

StoppingComparison compare_stopping(const AffineOperator& op,
                                    const ConvexSet& set,
                                    const IterationConfig& cfg,
                                    const Vector& x0, const Vector& x_star,
                                    double delta) {
  if (!(delta > 0.0)) throw ConfigError("comparison delta must be > 0");
  if (certify_moduli(op).expansiveness <= 0.0) {
    throw ConfigError("non-expansive operator: sigma_min(M) = 0, shortcut bound unavailable");
  }
  StoppingComparison out;
  out.delta = delta;
  out.trace = run_iteration(
      op, set, cfg, x0, x_star,
      [](std::int64_t, const Vector&, const Vector& projected) { return projected; },
      [&](const IterationRecord& rec, const Vector&, const Vector&) {
        if (!out.shortcut_n && *rec.shortcut_bound <= delta) out.shortcut_n = rec.n;
        if (!out.natural_n && rec.natural_residual <= delta) out.natural_n = rec.n;
        return out.shortcut_n && out.natural_n;
      });
  return out;
}

std::string trace_to_csv(const IterationTrace& trace) {
  std::string out = trace.has_reference ? "n,r_n,s_n,bound_n,dist_n\n" : "n,r_n,s_n,bound_n\n";
  for (const auto& rec : trace.records) {
    out += std::to_string(rec.n);
    out += ',';
    append_number(out, rec.natural_residual);
    out += ',';
    append_optional(out, rec.operator_residual);
    out += ',';
    append_optional(out, rec.shortcut_bound);
    if (trace.has_reference) {
      out += ',';
      append_optional(out, rec.distance);
    }
    out += '\n';
  }
  return out;
}

}  // namespace vicert
