/*
 * C interface to the vicert variational-inequality toolkit.
 *
 * All objects are opaque handles created by a vicert_*_create/_from_json call
 * and released with the matching _destroy. Functions return a vicert_status;
 * on failure vicert_last_error() describes the problem for the calling
 * thread. Vectors are passed as (pointer, length) in row-major doubles.
 */
#ifndef VICERT_H
#define VICERT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VICERT_API __declspec(dllexport)
#else
#define VICERT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vicert_status {
  VICERT_OK = 0,
  VICERT_ERR_INVALID_ARGUMENT = 1,
  VICERT_ERR_DIMENSION = 2,
  VICERT_ERR_VALIDATION = 3,
  VICERT_ERR_CONFIG = 4,
  VICERT_ERR_DIVERGENCE = 5,
  VICERT_ERR_PARSE = 6,
  VICERT_ERR_IO = 7,
  VICERT_ERR_BUFFER_TOO_SMALL = 8,
  VICERT_ERR_INTERNAL = 9
} vicert_status;

typedef enum vicert_report_status {
  VICERT_REPORT_PASS = 0,
  VICERT_REPORT_FAIL = 1,
  VICERT_REPORT_PRECONDITION_VIOLATED = 2
} vicert_report_status;

typedef enum vicert_trace_status {
  VICERT_TRACE_CONVERGED = 0,
  VICERT_TRACE_MAX_ITERS = 1
} vicert_trace_status;

typedef struct vicert_operator vicert_operator;
typedef struct vicert_set vicert_set;
typedef struct vicert_map vicert_map;
typedef struct vicert_report vicert_report;
typedef struct vicert_trace vicert_trace;

typedef struct vicert_moduli {
  double lipschitz;
  double strong_monotonicity;
  int has_ism_alpha;
  double ism_alpha;
  double expansiveness;
  double cocoercive_m;
  double cocoercive_v;
} vicert_moduli;

typedef struct vicert_config {
  double step;
  int64_t max_iters;
  double residual_tol;
  uint64_t seed;
  int64_t record_stride;
} vicert_config;

/* Fills cfg with the library defaults (step 0, 1000 iterations, tol 1e-8). */
VICERT_API void vicert_config_init(vicert_config* cfg);

/* Message for the last failed call on this thread ("" if none). */
VICERT_API const char* vicert_last_error(void);

/* Strings returned through char** out-parameters are freed with this. */
VICERT_API void vicert_string_free(char* s);

/* ---- operators ---------------------------------------------------------- */

/* matrix is n*n row-major, offset has n entries. */
VICERT_API vicert_status vicert_operator_create(size_t n, const double* matrix,
                                                const double* offset,
                                                vicert_operator** out);
/* { "matrix": [[...]], "offset": [...] } */
VICERT_API vicert_status vicert_operator_from_json(const char* json,
                                                   vicert_operator** out);
VICERT_API void vicert_operator_destroy(vicert_operator* op);
VICERT_API size_t vicert_operator_dim(const vicert_operator* op);
VICERT_API vicert_status vicert_operator_evaluate(const vicert_operator* op,
                                                  const double* x, size_t n,
                                                  double* out);
VICERT_API vicert_status vicert_certify_moduli(const vicert_operator* op,
                                               vicert_moduli* out);

/* Sampled pairs are uniform on [-10, 10]^n from `seed`. */
VICERT_API vicert_status vicert_check_ism(const vicert_operator* op,
                                          double alpha, int64_t samples,
                                          uint64_t seed, vicert_report** out);
VICERT_API vicert_status vicert_check_relaxed_cocoercive(
    const vicert_operator* op, double u, double v, int64_t samples,
    uint64_t seed, vicert_report** out);
VICERT_API vicert_status vicert_check_expansive(const vicert_operator* op,
                                                double gamma, int64_t samples,
                                                uint64_t seed,
                                                vicert_report** out);

/* ---- sets --------------------------------------------------------------- */

VICERT_API vicert_status vicert_set_box(const double* lower,
                                        const double* upper, size_t n,
                                        vicert_set** out);
VICERT_API vicert_status vicert_set_ball(const double* center, size_t n,
                                         double radius, vicert_set** out);
VICERT_API vicert_status vicert_set_halfspace(const double* normal, size_t n,
                                              double offset, vicert_set** out);
VICERT_API vicert_status vicert_set_simplex(size_t n, vicert_set** out);
/* { "type": "box"|"ball"|"halfspace"|"simplex"|"affine", ... } */
VICERT_API vicert_status vicert_set_from_json(const char* json,
                                              vicert_set** out);
VICERT_API void vicert_set_destroy(vicert_set* set);
VICERT_API size_t vicert_set_dim(const vicert_set* set);
VICERT_API vicert_status vicert_project(const vicert_set* set, const double* x,
                                        size_t n, double* out);
VICERT_API vicert_status vicert_contains(const vicert_set* set,
                                         const double* x, size_t n, double tol,
                                         int* out);

/* ---- nonexpansive maps -------------------------------------------------- */

/* { "type": "identity" | "projection" | "affine_average", ... } */
VICERT_API vicert_status vicert_map_from_json(const char* json,
                                              vicert_map** out);
VICERT_API void vicert_map_destroy(vicert_map* map);

/* ---- solvers ------------------------------------------------------------ */

/* x_ref may be NULL. */
VICERT_API vicert_status vicert_solve_projected_gradient(
    const vicert_operator* op, const vicert_set* set, const vicert_config* cfg,
    const double* x0, const double* x_ref, size_t n, vicert_trace** out);
/* map may be NULL (identity); anchor may be NULL (x0); x_ref may be NULL. */
VICERT_API vicert_status vicert_solve_halpern(
    const vicert_operator* op, const vicert_set* set, const vicert_map* map,
    const vicert_config* cfg, const double* x0, const double* anchor,
    const double* x_ref, size_t n, vicert_trace** out);
VICERT_API vicert_status vicert_shortcut_distance_bound(
    double gamma, double operator_residual, double* out);
/* shortcut_n / natural_n are -1 when the criterion never fired. */
VICERT_API vicert_status vicert_compare_stopping(
    const vicert_operator* op, const vicert_set* set, const vicert_config* cfg,
    const double* x0, const double* x_star, size_t n, double delta,
    int64_t* shortcut_n, int64_t* natural_n, vicert_trace** out);

VICERT_API void vicert_trace_destroy(vicert_trace* trace);
VICERT_API vicert_trace_status vicert_trace_status_of(const vicert_trace* t);
VICERT_API int64_t vicert_trace_iterations(const vicert_trace* t);
VICERT_API size_t vicert_trace_record_count(const vicert_trace* t);
VICERT_API vicert_status vicert_trace_final_x(const vicert_trace* t,
                                              double* out, size_t n);
VICERT_API vicert_status vicert_trace_to_csv(const vicert_trace* t, char** out);

/* ---- verification ------------------------------------------------------- */

/* gamma_out receives v - m eps^2 (may be NULL). */
VICERT_API vicert_status vicert_lemma_cocoercive_expansive(
    const vicert_operator* op, double m, double v, double eps, int64_t samples,
    uint64_t seed, double* gamma_out, vicert_report** out);
VICERT_API vicert_status vicert_check_monotone_chain(
    const vicert_operator* op, double m, double v, double eps, int64_t samples,
    uint64_t seed, vicert_report** out);
VICERT_API vicert_status vicert_check_singleton_vi(const vicert_operator* op,
                                                   const vicert_set* set,
                                                   double spacing,
                                                   double vi_tolerance,
                                                   vicert_report** out);
/* count receives the number of grid solutions; solutions (may be NULL) is
 * filled row-major up to capacity points. */
VICERT_API vicert_status vicert_brute_force_vi(
    const vicert_operator* op, const vicert_set* set, double spacing,
    double vi_tolerance, double* solutions, size_t capacity, size_t* count);

VICERT_API void vicert_report_destroy(vicert_report* r);
VICERT_API vicert_report_status vicert_report_status_of(const vicert_report* r);
VICERT_API int64_t vicert_report_samples_used(const vicert_report* r);
VICERT_API double vicert_report_max_violation(const vicert_report* r);
VICERT_API int vicert_report_has_witness(const vicert_report* r);
/* x and y each receive n entries. */
VICERT_API vicert_status vicert_report_witness(const vicert_report* r,
                                               double* x, double* y, size_t n);
VICERT_API vicert_status vicert_report_to_json(const vicert_report* r,
                                               char** out);

/* ---- scenarios ---------------------------------------------------------- */

typedef struct vicert_run_options {
  int has_seed;
  uint64_t seed;
  int has_max_iters;
  int64_t max_iters;
} vicert_run_options;

/* Runs a scenario file. exit_status receives 0 (all Pass), 1 (a report
 * failed or output could not be written), 2 (malformed scenario), 3
 * (precondition violated) or 4 (divergence). message (may be NULL) receives
 * a description of the first problem, to be freed with vicert_string_free.
 * options may be NULL. */
VICERT_API vicert_status vicert_run_scenario(const char* path,
                                             const char* out_dir,
                                             const vicert_run_options* options,
                                             int* exit_status, char** message);

/* Tab-separated "name\tdescription\n" lines for the *.json fixtures in dir. */
VICERT_API vicert_status vicert_list_golden(const char* dir, char** out);

#ifdef __cplusplus
}
#endif

#endif /* VICERT_H */
