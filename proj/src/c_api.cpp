#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>

#include "vicert.h"
#include "vicert/error.hpp"
#include "vicert/json_io.hpp"
#include "vicert/scenario.hpp"
#include "vicert/solvers.hpp"
#include "vicert/verification.hpp"

struct vicert_operator {
  vicert::AffineOperator value;
};
struct vicert_set {
  vicert::ConvexSet value;
};
struct vicert_map {
  vicert::NonexpansiveMap value;
};
struct vicert_report {
  vicert::VerificationReport value;
};
struct vicert_trace {
  vicert::IterationTrace value;
};

namespace {

thread_local std::string g_last_error;

vicert_status code_of(vicert::ErrorCode code) {
  using vicert::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return VICERT_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDimensionMismatch:
      return VICERT_ERR_DIMENSION;
    case ErrorCode::kValidation:
      return VICERT_ERR_VALIDATION;
    case ErrorCode::kConfiguration:
      return VICERT_ERR_CONFIG;
    case ErrorCode::kDivergence:
      return VICERT_ERR_DIVERGENCE;
    case ErrorCode::kParse:
      return VICERT_ERR_PARSE;
    case ErrorCode::kIo:
      return VICERT_ERR_IO;
  }
  return VICERT_ERR_INTERNAL;
}

vicert_status fail(vicert_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <class F>
vicert_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return VICERT_OK;
  } catch (const vicert::Error& e) {
    return fail(code_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(VICERT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VICERT_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw vicert::Error(vicert::ErrorCode::kInvalidArgument, what);
}

vicert::Vector to_vector(const double* data, size_t n) {
  require(data != nullptr || n == 0, "null vector pointer");
  vicert::Vector v(static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = data[i];
  return v;
}

void from_vector(const vicert::Vector& v, double* out, size_t n) {
  require(out != nullptr, "null output pointer");
  if (static_cast<size_t>(v.size()) != n) {
    throw vicert::DimensionError("output buffer", v.size(), static_cast<std::int64_t>(n));
  }
  for (size_t i = 0; i < n; ++i) out[i] = v[static_cast<Eigen::Index>(i)];
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

vicert::IterationConfig to_config(const vicert_config* cfg) {
  require(cfg != nullptr, "null config");
  vicert::IterationConfig out;
  out.step = cfg->step;
  out.max_iters = cfg->max_iters;
  out.residual_tol = cfg->residual_tol;
  out.seed = cfg->seed;
  out.record_stride = cfg->record_stride;
  return out;
}

std::optional<vicert::Vector> optional_vector(const double* data, size_t n) {
  if (data == nullptr) return std::nullopt;
  return to_vector(data, n);
}

template <class Handle>
void require_handle(const Handle* h) {
  require(h != nullptr, "null handle");
}

}  // namespace

extern "C" {

void vicert_config_init(vicert_config* cfg) {
  if (cfg == nullptr) return;
  const vicert::IterationConfig defaults;
  cfg->step = defaults.step;
  cfg->max_iters = defaults.max_iters;
  cfg->residual_tol = defaults.residual_tol;
  cfg->seed = defaults.seed;
  cfg->record_stride = defaults.record_stride;
}

const char* vicert_last_error(void) { return g_last_error.c_str(); }

void vicert_string_free(char* s) { std::free(s); }

vicert_status vicert_operator_create(size_t n, const double* matrix, const double* offset,
                                     vicert_operator** out) {
  return guarded([&] {
    require(out != nullptr && matrix != nullptr && offset != nullptr, "null argument");
    const auto dim = static_cast<Eigen::Index>(n);
    vicert::Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = matrix[r * dim + c];
    }
    *out = new vicert_operator{vicert::AffineOperator(std::move(m), to_vector(offset, n))};
  });
}

vicert_status vicert_operator_from_json(const char* json, vicert_operator** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = new vicert_operator{vicert::operator_from_json(vicert::parse_json_text(json))};
  });
}

void vicert_operator_destroy(vicert_operator* op) { delete op; }

size_t vicert_operator_dim(const vicert_operator* op) {
  return op ? static_cast<size_t>(op->value.dim()) : 0;
}

vicert_status vicert_operator_evaluate(const vicert_operator* op, const double* x, size_t n,
                                       double* out) {
  return guarded([&] {
    require_handle(op);
    from_vector(vicert::evaluate(op->value, to_vector(x, n)), out, n);
  });
}

vicert_status vicert_certify_moduli(const vicert_operator* op, vicert_moduli* out) {
  return guarded([&] {
    require_handle(op);
    require(out != nullptr, "null output pointer");
    const vicert::OperatorModuli m = vicert::certify_moduli(op->value);
    out->lipschitz = m.lipschitz;
    out->strong_monotonicity = m.strong_monotonicity;
    out->has_ism_alpha = m.ism_alpha.has_value() ? 1 : 0;
    out->ism_alpha = m.ism_alpha.value_or(0.0);
    out->expansiveness = m.expansiveness;
    out->cocoercive_m = m.cocoercive_m;
    out->cocoercive_v = m.cocoercive_v;
  });
}

vicert_status vicert_check_ism(const vicert_operator* op, double alpha, int64_t samples,
                               uint64_t seed, vicert_report** out) {
  return guarded([&] {
    require_handle(op);
    require(out != nullptr, "null output pointer");
    const auto pairs = vicert::sample_pairs(op->value.dim(), samples, seed);
    auto r = vicert::check_ism(op->value, alpha, pairs);
    r.seed = seed;
    *out = new vicert_report{std::move(r)};
  });
}

vicert_status vicert_check_relaxed_cocoercive(const vicert_operator* op, double u, double v,
                                              int64_t samples, uint64_t seed,
                                              vicert_report** out) {
  return guarded([&] {
    require_handle(op);
    require(out != nullptr, "null output pointer");
    const auto pairs = vicert::sample_pairs(op->value.dim(), samples, seed);
    auto r = vicert::check_relaxed_cocoercive(op->value, u, v, pairs);
    r.seed = seed;
    *out = new vicert_report{std::move(r)};
  });
}

vicert_status vicert_check_expansive(const vicert_operator* op, double gamma, int64_t samples,
                                     uint64_t seed, vicert_report** out) {
  return guarded([&] {
    require_handle(op);
    require(out != nullptr, "null output pointer");
    const auto pairs = vicert::sample_pairs(op->value.dim(), samples, seed);
    auto r = vicert::check_expansive(op->value, gamma, pairs);
    r.seed = seed;
    *out = new vicert_report{std::move(r)};
  });
}

vicert_status vicert_set_box(const double* lower, const double* upper, size_t n,
                             vicert_set** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = new vicert_set{vicert::ConvexSet::box(to_vector(lower, n), to_vector(upper, n))};
  });
}

vicert_status vicert_set_ball(const double* center, size_t n, double radius, vicert_set** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = new vicert_set{vicert::ConvexSet::ball(to_vector(center, n), radius)};
  });
}

vicert_status vicert_set_halfspace(const double* normal, size_t n, double offset,
                                   vicert_set** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = new vicert_set{vicert::ConvexSet::halfspace(to_vector(normal, n), offset)};
  });
}

vicert_status vicert_set_simplex(size_t n, vicert_set** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = new vicert_set{vicert::ConvexSet::simplex(static_cast<Eigen::Index>(n))};
  });
}

vicert_status vicert_set_from_json(const char* json, vicert_set** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = new vicert_set{vicert::set_from_json(vicert::parse_json_text(json))};
  });
}

void vicert_set_destroy(vicert_set* set) { delete set; }

size_t vicert_set_dim(const vicert_set* set) {
  return set ? static_cast<size_t>(set->value.dim()) : 0;
}

vicert_status vicert_project(const vicert_set* set, const double* x, size_t n, double* out) {
  return guarded([&] {
    require_handle(set);
    from_vector(vicert::project(set->value, to_vector(x, n)), out, n);
  });
}

vicert_status vicert_contains(const vicert_set* set, const double* x, size_t n, double tol,
                              int* out) {
  return guarded([&] {
    require_handle(set);
    require(out != nullptr, "null output pointer");
    *out = vicert::contains(set->value, to_vector(x, n), tol) ? 1 : 0;
  });
}

vicert_status vicert_map_from_json(const char* json, vicert_map** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = new vicert_map{vicert::map_from_json(vicert::parse_json_text(json))};
  });
}

void vicert_map_destroy(vicert_map* map) { delete map; }

vicert_status vicert_solve_projected_gradient(const vicert_operator* op, const vicert_set* set,
                                              const vicert_config* cfg, const double* x0,
                                              const double* x_ref, size_t n,
                                              vicert_trace** out) {
  return guarded([&] {
    require_handle(op);
    require_handle(set);
    require(out != nullptr, "null output pointer");
    *out = new vicert_trace{vicert::solve_projected_gradient(
        op->value, set->value, to_config(cfg), to_vector(x0, n), optional_vector(x_ref, n))};
  });
}

vicert_status vicert_solve_halpern(const vicert_operator* op, const vicert_set* set,
                                   const vicert_map* map, const vicert_config* cfg,
                                   const double* x0, const double* anchor, const double* x_ref,
                                   size_t n, vicert_trace** out) {
  return guarded([&] {
    require_handle(op);
    require_handle(set);
    require(out != nullptr, "null output pointer");
    const vicert::NonexpansiveMap s = map ? map->value : vicert::NonexpansiveMap::identity();
    const vicert::Vector start = to_vector(x0, n);
    const vicert::Vector u = anchor ? to_vector(anchor, n) : start;
    *out = new vicert_trace{vicert::solve_halpern(op->value, set->value, s, to_config(cfg),
                                                  start, u, optional_vector(x_ref, n))};
  });
}

vicert_status vicert_shortcut_distance_bound(double gamma, double operator_residual,
                                             double* out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = vicert::shortcut_distance_bound(gamma, operator_residual);
  });
}

vicert_status vicert_compare_stopping(const vicert_operator* op, const vicert_set* set,
                                      const vicert_config* cfg, const double* x0,
                                      const double* x_star, size_t n, double delta,
                                      int64_t* shortcut_n, int64_t* natural_n,
                                      vicert_trace** out) {
  return guarded([&] {
    require_handle(op);
    require_handle(set);
    require(shortcut_n != nullptr && natural_n != nullptr, "null output pointer");
    auto cmp = vicert::compare_stopping(op->value, set->value, to_config(cfg), to_vector(x0, n),
                                        to_vector(x_star, n), delta);
    *shortcut_n = cmp.shortcut_n.value_or(-1);
    *natural_n = cmp.natural_n.value_or(-1);
    if (out != nullptr) *out = new vicert_trace{std::move(cmp.trace)};
  });
}

void vicert_trace_destroy(vicert_trace* trace) { delete trace; }

vicert_trace_status vicert_trace_status_of(const vicert_trace* t) {
  return t && t->value.status == vicert::TraceStatus::kConverged ? VICERT_TRACE_CONVERGED
                                                                 : VICERT_TRACE_MAX_ITERS;
}

int64_t vicert_trace_iterations(const vicert_trace* t) { return t ? t->value.iterations : 0; }

size_t vicert_trace_record_count(const vicert_trace* t) {
  return t ? t->value.records.size() : 0;
}

vicert_status vicert_trace_final_x(const vicert_trace* t, double* out, size_t n) {
  return guarded([&] {
    require_handle(t);
    from_vector(t->value.final_x, out, n);
  });
}

vicert_status vicert_trace_to_csv(const vicert_trace* t, char** out) {
  return guarded([&] {
    require_handle(t);
    require(out != nullptr, "null output pointer");
    *out = duplicate(vicert::trace_to_csv(t->value));
  });
}

vicert_status vicert_lemma_cocoercive_expansive(const vicert_operator* op, double m, double v,
                                                double eps, int64_t samples, uint64_t seed,
                                                double* gamma_out, vicert_report** out) {
  return guarded([&] {
    require_handle(op);
    require(out != nullptr, "null output pointer");
    const auto pairs = vicert::sample_pairs(op->value.dim(), samples, seed);
    auto outcome = vicert::lemma_cocoercive_expansive(op->value, m, v, eps, pairs);
    outcome.report.seed = seed;
    if (gamma_out != nullptr) *gamma_out = outcome.gamma;
    *out = new vicert_report{std::move(outcome.report)};
  });
}

vicert_status vicert_check_monotone_chain(const vicert_operator* op, double m, double v,
                                          double eps, int64_t samples, uint64_t seed,
                                          vicert_report** out) {
  return guarded([&] {
    require_handle(op);
    require(out != nullptr, "null output pointer");
    const auto pairs = vicert::sample_pairs(op->value.dim(), samples, seed);
    auto r = vicert::check_monotone_chain(op->value, m, v, eps, pairs);
    r.seed = seed;
    *out = new vicert_report{std::move(r)};
  });
}

vicert_status vicert_check_singleton_vi(const vicert_operator* op, const vicert_set* set,
                                        double spacing, double vi_tolerance,
                                        vicert_report** out) {
  return guarded([&] {
    require_handle(op);
    require_handle(set);
    require(out != nullptr, "null output pointer");
    const vicert::BruteForceGrid grid(set->value, spacing, vi_tolerance);
    *out = new vicert_report{vicert::check_singleton_vi(op->value, grid)};
  });
}

vicert_status vicert_brute_force_vi(const vicert_operator* op, const vicert_set* set,
                                    double spacing, double vi_tolerance, double* solutions,
                                    size_t capacity, size_t* count) {
  return guarded([&] {
    require_handle(op);
    require_handle(set);
    require(count != nullptr, "null output pointer");
    const vicert::BruteForceGrid grid(set->value, spacing, vi_tolerance);
    const auto sol = vicert::brute_force_vi(op->value, grid);
    *count = sol.size();
    if (solutions == nullptr) return;
    const auto n = static_cast<size_t>(op->value.dim());
    for (size_t k = 0; k < sol.size() && k < capacity; ++k) {
      from_vector(sol[k], solutions + k * n, n);
    }
  });
}

void vicert_report_destroy(vicert_report* r) { delete r; }

vicert_report_status vicert_report_status_of(const vicert_report* r) {
  if (r == nullptr) return VICERT_REPORT_FAIL;
  switch (r->value.status) {
    case vicert::ReportStatus::kPass:
      return VICERT_REPORT_PASS;
    case vicert::ReportStatus::kFail:
      return VICERT_REPORT_FAIL;
    case vicert::ReportStatus::kPreconditionViolated:
      return VICERT_REPORT_PRECONDITION_VIOLATED;
  }
  return VICERT_REPORT_FAIL;
}

int64_t vicert_report_samples_used(const vicert_report* r) {
  return r ? r->value.samples_used : 0;
}

double vicert_report_max_violation(const vicert_report* r) {
  return r ? r->value.max_violation : 0.0;
}

int vicert_report_has_witness(const vicert_report* r) {
  return r && r->value.witness.has_value() ? 1 : 0;
}

vicert_status vicert_report_witness(const vicert_report* r, double* x, double* y, size_t n) {
  return guarded([&] {
    require_handle(r);
    require(r->value.witness.has_value(), "report has no witness");
    from_vector(r->value.witness->first, x, n);
    from_vector(r->value.witness->second, y, n);
  });
}

vicert_status vicert_report_to_json(const vicert_report* r, char** out) {
  return guarded([&] {
    require_handle(r);
    require(out != nullptr, "null output pointer");
    *out = duplicate(vicert::report_to_json(r->value).dump());
  });
}

vicert_status vicert_run_scenario(const char* path, const char* out_dir,
                                  const vicert_run_options* options, int* exit_status,
                                  char** message) {
  return guarded([&] {
    require(path != nullptr && out_dir != nullptr && exit_status != nullptr, "null argument");
    vicert::RunOverrides overrides;
    if (options != nullptr && options->has_seed) overrides.seed = options->seed;
    if (options != nullptr && options->has_max_iters) overrides.max_iters = options->max_iters;
    const vicert::RunResult result = vicert::run_scenario(path, out_dir, overrides);
    *exit_status = result.exit_status;
    if (message != nullptr) *message = duplicate(result.message);
  });
}

vicert_status vicert_list_golden(const char* dir, char** out) {
  return guarded([&] {
    require(dir != nullptr && out != nullptr, "null argument");
    std::string listing;
    for (const auto& entry : vicert::list_golden(dir)) {
      listing += entry.name + "\t" + entry.description + "\n";
    }
    *out = duplicate(listing);
  });
}

}  // extern "C"
