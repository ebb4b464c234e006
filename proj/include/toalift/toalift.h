/*
 * toalift: time-of-arrival lateration with dimension-lifted objectives.
 *
 * C interface to the shared library. All objects are opaque handles owned by
 * the caller and released with the matching *_destroy function. Functions
 * return a toalift_status; on failure toalift_last_error() describes the
 * problem. The error text is thread-local and valid until the next failing
 * call on the same thread.
 *
 * Coordinates are passed as flat row-major arrays: a station list of N
 * points in D dimensions is N*D doubles.
 */
#ifndef TOALIFT_TOALIFT_H
#define TOALIFT_TOALIFT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TOALIFT_BUILDING_LIBRARY)
#    define TOALIFT_API __declspec(dllexport)
#  else
#    define TOALIFT_API __declspec(dllimport)
#  endif
#else
#  define TOALIFT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define TOALIFT_ABI_VERSION 1u

typedef enum toalift_status {
  TOALIFT_OK = 0,
  TOALIFT_ERR_INVALID_ARGUMENT = 1,
  TOALIFT_ERR_GENERATION_FAILED = 2,
  TOALIFT_ERR_NON_FINITE = 3,
  TOALIFT_ERR_IO = 4,
  TOALIFT_ERR_PARSE = 5,
  TOALIFT_ERR_BUFFER_TOO_SMALL = 6,
  TOALIFT_ERR_INTERNAL = 7
} toalift_status;

TOALIFT_API uint32_t toalift_abi_version(void);
TOALIFT_API const char* toalift_status_name(toalift_status status);
TOALIFT_API const char* toalift_last_error(void);

/* Strings returned through char** out-parameters are heap-allocated. */
TOALIFT_API void toalift_string_free(char* s);

typedef struct toalift_scenario toalift_scenario;
typedef struct toalift_measurement toalift_measurement;
typedef struct toalift_result toalift_result;
typedef struct toalift_experiment toalift_experiment;

/* ---- scenarios --------------------------------------------------------- */

TOALIFT_API toalift_status toalift_scenario_create(int dim, const double* stations, size_t n_stations,
                                                   const double* truth, toalift_scenario** out);
/* Anchors (0.5,0), (0,2), (0,-2); transponder (1,0). */
TOALIFT_API toalift_status toalift_scenario_demo2d(toalift_scenario** out);
/* min_normalized_sv <= 0 disables the geometry filter; max_attempts 0 uses the
 * default cap of 10000. */
TOALIFT_API toalift_status toalift_scenario_generate(int dim, size_t n_stations, double cube_side,
                                                     double min_normalized_sv, uint64_t seed,
                                                     size_t max_attempts, toalift_scenario** out);
TOALIFT_API void toalift_scenario_destroy(toalift_scenario* s);

TOALIFT_API int toalift_scenario_dim(const toalift_scenario* s);
TOALIFT_API size_t toalift_scenario_station_count(const toalift_scenario* s);
TOALIFT_API toalift_status toalift_scenario_stations(const toalift_scenario* s, double* out, size_t capacity);
TOALIFT_API toalift_status toalift_scenario_truth(const toalift_scenario* s, double* out, size_t capacity);
TOALIFT_API toalift_status toalift_scenario_true_ranges(const toalift_scenario* s, double* out,
                                                        size_t capacity);

TOALIFT_API toalift_status toalift_geometry_ok(int dim, const double* stations, size_t n_stations,
                                               double min_normalized_sv, int* out_ok);

/* ---- measurements ------------------------------------------------------ */

TOALIFT_API toalift_status toalift_measurement_exact(const toalift_scenario* s, toalift_measurement** out);
TOALIFT_API toalift_status toalift_measurement_noisy(const toalift_scenario* s, double sigma, uint64_t seed,
                                                     toalift_measurement** out);
TOALIFT_API toalift_status toalift_measurement_create(const double* ranges, const double* true_ranges,
                                                      size_t n, double sigma, toalift_measurement** out);
TOALIFT_API void toalift_measurement_destroy(toalift_measurement* m);

TOALIFT_API size_t toalift_measurement_count(const toalift_measurement* m);
TOALIFT_API double toalift_measurement_sigma(const toalift_measurement* m);
TOALIFT_API toalift_status toalift_measurement_ranges(const toalift_measurement* m, double* out, size_t capacity);
TOALIFT_API toalift_status toalift_measurement_true_ranges(const toalift_measurement* m, double* out,
                                                           size_t capacity);

/* JSON document {dim, stations, truth, ranges, true_ranges, sigma}. */
TOALIFT_API toalift_status toalift_scenario_to_json(const toalift_scenario* s, const toalift_measurement* m,
                                                    char** out_json);
TOALIFT_API toalift_status toalift_scenario_from_json(const char* json, toalift_scenario** out_scenario,
                                                      toalift_measurement** out_measurement);

/* ---- objectives -------------------------------------------------------- */

typedef enum toalift_objective_form {
  TOALIFT_OBJECTIVE_RANGE = 0,   /* sqrt(|p-B|^2 + sum lambda^2) - d */
  TOALIFT_OBJECTIVE_SQUARED = 1  /* |p-B|^2 + sum lambda^2 - d^2 */
} toalift_objective_form;

typedef struct toalift_objective {
  toalift_objective_form form;
  int lifts; /* 0 for the plain objective */
} toalift_objective;

/* point holds dim position coordinates followed by `lifts` lambdas. */
TOALIFT_API toalift_status toalift_cost(toalift_objective objective, const toalift_scenario* s,
                                        const toalift_measurement* m, const double* point, double* out_cost);
TOALIFT_API toalift_status toalift_curvature_indicator(const toalift_scenario* s, const toalift_measurement* m,
                                                       const double* position, double* out_value,
                                                       int* out_clamped);

typedef struct toalift_gradient_check {
  toalift_objective objective;
  size_t points;
  double max_relative_error;
  double max_lambda_column_at_zero;
} toalift_gradient_check;

/* Fills up to `capacity` rows (one per objective kind; 7 kinds) and stores
 * the number of kinds in *out_count. corrupt != 0 perturbs the analytic
 * Jacobian (negative control). */
TOALIFT_API toalift_status toalift_check_gradients(uint64_t seed, size_t points_per_kind, int corrupt,
                                                   toalift_gradient_check* out, size_t capacity,
                                                   size_t* out_count);
TOALIFT_API double toalift_gradient_tolerance(void);

/* ---- solver ------------------------------------------------------------ */

typedef enum toalift_damping {
  TOALIFT_DAMPING_IDENTITY = 0,
  TOALIFT_DAMPING_JACOBIAN_DIAGONAL = 1
} toalift_damping;

typedef struct toalift_lm_params {
  int max_iterations;
  int max_function_evals; /* <= 0: 100 * number of variables */
  double function_tolerance;
  double step_tolerance;
  double optimality_tolerance;
  double initial_damping;
  double damping_increase;
  double damping_decrease;
  toalift_damping damping;
} toalift_lm_params;

TOALIFT_API toalift_lm_params toalift_lm_params_default(void);

typedef enum toalift_termination {
  TOALIFT_TERM_FUNCTION_TOLERANCE = 0,
  TOALIFT_TERM_STEP_TOLERANCE = 1,
  TOALIFT_TERM_OPTIMALITY_TOLERANCE = 2,
  TOALIFT_TERM_MAX_ITERATIONS = 3,
  TOALIFT_TERM_MAX_FUNCTION_EVALS = 4
} toalift_termination;

TOALIFT_API const char* toalift_termination_name(toalift_termination t);

typedef enum toalift_strategy_kind {
  TOALIFT_STRATEGY_PLAIN = 0,
  TOALIFT_STRATEGY_LIFTED = 1,
  TOALIFT_STRATEGY_RESTART = 2
} toalift_strategy_kind;

typedef struct toalift_strategy {
  toalift_strategy_kind kind;
  int lifts;
  double lambda0;
} toalift_strategy;

/* "plain", "lifted:k=1,lambda0=1.0", "restart:k=1,lambda0=1.0" */
TOALIFT_API toalift_status toalift_strategy_parse(const char* text, toalift_strategy* out);
TOALIFT_API toalift_status toalift_strategy_format(const toalift_strategy* strategy, char* buffer,
                                                   size_t capacity);

/* params may be NULL for defaults. */
TOALIFT_API toalift_status toalift_solve(const toalift_strategy* strategy, const toalift_scenario* s,
                                         const toalift_measurement* m, const double* x0_position,
                                         const toalift_lm_params* params, toalift_result** out);
/* x0 holds dim + lifts values. */
TOALIFT_API toalift_status toalift_lm_solve(toalift_objective objective, const toalift_scenario* s,
                                            const toalift_measurement* m, const double* x0,
                                            const toalift_lm_params* params, toalift_result** out);
TOALIFT_API void toalift_result_destroy(toalift_result* r);

TOALIFT_API size_t toalift_result_dim(const toalift_result* r);
TOALIFT_API toalift_status toalift_result_position(const toalift_result* r, double* out, size_t capacity);
TOALIFT_API size_t toalift_result_lambda_count(const toalift_result* r);
TOALIFT_API toalift_status toalift_result_lambdas(const toalift_result* r, double* out, size_t capacity);
TOALIFT_API double toalift_result_cost(const toalift_result* r);
TOALIFT_API toalift_termination toalift_result_termination(const toalift_result* r);
TOALIFT_API int toalift_result_iterations(const toalift_result* r);
TOALIFT_API int toalift_result_function_evals(const toalift_result* r);
TOALIFT_API int toalift_result_clamped(const toalift_result* r);
TOALIFT_API size_t toalift_result_trace_length(const toalift_result* r);
/* Copies trace entry `index`; lambdas may be NULL when lambda_capacity is 0. */
TOALIFT_API toalift_status toalift_result_trace_point(const toalift_result* r, size_t index, double* position,
                                                      size_t position_capacity, double* lambdas,
                                                      size_t lambda_capacity, size_t* out_lambda_count,
                                                      double* out_cost);
TOALIFT_API toalift_status toalift_result_to_json(const toalift_result* r, char** out_json);
/* Header iter,x,y[,z][,lambda...],cost; one row per accepted iterate. */
TOALIFT_API toalift_status toalift_result_write_trace_csv(const toalift_result* r, const char* path);

/* ---- experiments ------------------------------------------------------- */

typedef struct toalift_experiment_config {
  int dim;
  size_t n_stations;
  double sigma;
  size_t trials;
  double cube_side;
  const toalift_strategy* strategies; /* NULL/0: plain and lifted(k=1, lambda0=1) */
  size_t strategy_count;
  double outlier_threshold;
  double geometry_threshold; /* <= 0 disables the geometry filter */
  uint64_t master_seed;
  size_t max_generation_attempts;
  double x0_max_offset; /* < 0: initial estimates uniform in the cube */
  toalift_lm_params lm;
} toalift_experiment_config;

TOALIFT_API toalift_experiment_config toalift_experiment_config_default(void);

typedef struct toalift_summary {
  size_t trial_count;
  double mean_error;
  double std_error;
  size_t outlier_count;
  int has_no_outlier_stats;
  double mean_error_no_outliers;
  double std_error_no_outliers;
} toalift_summary;

/* workers 0 uses the hardware concurrency. Output is independent of workers. */
TOALIFT_API toalift_status toalift_experiment_run(const toalift_experiment_config* config, size_t workers,
                                                  toalift_experiment** out);
TOALIFT_API void toalift_experiment_destroy(toalift_experiment* e);

TOALIFT_API size_t toalift_experiment_trial_count(const toalift_experiment* e);
TOALIFT_API size_t toalift_experiment_strategy_count(const toalift_experiment* e);
TOALIFT_API toalift_status toalift_experiment_summary(const toalift_experiment* e, size_t strategy_index,
                                                      toalift_summary* out);
TOALIFT_API toalift_status toalift_experiment_trial_error(const toalift_experiment* e, size_t trial_index,
                                                          size_t strategy_index, double* out_error,
                                                          int* out_outlier);
TOALIFT_API toalift_status toalift_experiment_trial_position(const toalift_experiment* e, size_t trial_index,
                                                             size_t strategy_index, double* out,
                                                             size_t capacity);

TOALIFT_API toalift_status toalift_experiment_write_results_csv(const toalift_experiment* e, const char* path);
TOALIFT_API toalift_status toalift_experiment_write_summary_csv(const toalift_experiment* e, const char* path);
TOALIFT_API toalift_status toalift_experiment_write_summary_json(const toalift_experiment* e, const char* path);
TOALIFT_API toalift_status toalift_experiment_write_scatter_csv(const toalift_experiment* e, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* TOALIFT_TOALIFT_H */
