#include "toalift/toalift.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "diagnostics.hpp"
#include "experiments.hpp"
#include "io.hpp"
#include "lm_solver.hpp"
#include "model.hpp"
#include "objectives.hpp"
#include "strategies.hpp"

struct toalift_scenario {
  toalift::Scenario value;
};

struct toalift_measurement {
  toalift::MeasurementSet value;
};

struct toalift_result {
  toalift::SolveResult value;
};

struct toalift_experiment {
  toalift::ExperimentResult value;
};

namespace {

thread_local std::string g_last_error;

toalift_status fail(toalift_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

toalift_status map_code(toalift::ErrorCode code) {
  switch (code) {
    case toalift::ErrorCode::InvalidArgument: return TOALIFT_ERR_INVALID_ARGUMENT;
    case toalift::ErrorCode::GenerationFailed: return TOALIFT_ERR_GENERATION_FAILED;
    case toalift::ErrorCode::NonFiniteInput: return TOALIFT_ERR_NON_FINITE;
    case toalift::ErrorCode::Io: return TOALIFT_ERR_IO;
    case toalift::ErrorCode::Parse: return TOALIFT_ERR_PARSE;
  }
  return TOALIFT_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
toalift_status guarded(F&& body) {
  try {
    return body();
  } catch (const toalift::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(TOALIFT_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TOALIFT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TOALIFT_ERR_INTERNAL, e.what());
  }
}

#define TOALIFT_REQUIRE(cond, msg) \
  do {                             \
    if (!(cond)) return fail(TOALIFT_ERR_INVALID_ARGUMENT, msg); \
  } while (0)

toalift_status copy_out(const double* src, std::size_t n, double* out, std::size_t capacity) {
  if (n > 0 && out == nullptr) return fail(TOALIFT_ERR_INVALID_ARGUMENT, "output buffer is null");
  if (capacity < n)
    return fail(TOALIFT_ERR_BUFFER_TOO_SMALL,
                "buffer holds " + std::to_string(capacity) + " values, need " + std::to_string(n));
  if (n > 0) std::memcpy(out, src, n * sizeof(double));
  return TOALIFT_OK;
}

toalift_status copy_out(const Eigen::VectorXd& v, double* out, std::size_t capacity) {
  return copy_out(v.data(), static_cast<std::size_t>(v.size()), out, capacity);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

toalift::Point point_from(const double* data, int dim) {
  return Eigen::Map<const Eigen::VectorXd>(data, dim);
}

toalift::ObjectiveKind kind_from(toalift_objective o) {
  if (o.lifts < 0) throw toalift::Error(toalift::ErrorCode::InvalidArgument, "lifts must be >= 0");
  if (o.form == TOALIFT_OBJECTIVE_RANGE)
    return o.lifts == 0 ? toalift::ObjectiveKind::plain_range() : toalift::ObjectiveKind::lifted_range(o.lifts);
  if (o.form == TOALIFT_OBJECTIVE_SQUARED)
    return o.lifts == 0 ? toalift::ObjectiveKind::plain_squared()
                        : toalift::ObjectiveKind::lifted_squared(o.lifts);
  throw toalift::Error(toalift::ErrorCode::InvalidArgument, "unknown objective form");
}

toalift_objective objective_to_c(const toalift::ObjectiveKind& k) {
  return {k.form() == toalift::ObjectiveForm::Range ? TOALIFT_OBJECTIVE_RANGE : TOALIFT_OBJECTIVE_SQUARED,
          k.lifts()};
}

toalift::LmParams params_from(const toalift_lm_params* p) {
  toalift::LmParams out;
  if (!p) return out;
  out.max_iterations = p->max_iterations;
  if (p->max_function_evals > 0) out.max_function_evals = p->max_function_evals;
  out.function_tolerance = p->function_tolerance;
  out.step_tolerance = p->step_tolerance;
  out.optimality_tolerance = p->optimality_tolerance;
  out.initial_damping = p->initial_damping;
  out.damping_increase = p->damping_increase;
  out.damping_decrease = p->damping_decrease;
  switch (p->damping) {
    case TOALIFT_DAMPING_IDENTITY: out.scaling = toalift::DampingScaling::Identity; break;
    case TOALIFT_DAMPING_JACOBIAN_DIAGONAL: out.scaling = toalift::DampingScaling::JacobianDiagonal; break;
    default: throw toalift::Error(toalift::ErrorCode::InvalidArgument, "unknown damping scaling");
  }
  return out;
}

toalift::Strategy strategy_from(const toalift_strategy& s) {
  toalift::Strategy out;
  switch (s.kind) {
    case TOALIFT_STRATEGY_PLAIN: return toalift::Strategy::plain();
    case TOALIFT_STRATEGY_LIFTED: out = toalift::Strategy::lifted(s.lifts, s.lambda0); break;
    case TOALIFT_STRATEGY_RESTART: out = toalift::Strategy::restart(s.lifts, s.lambda0); break;
    default: throw toalift::Error(toalift::ErrorCode::InvalidArgument, "unknown strategy kind");
  }
  out.validate();
  return out;
}

toalift_strategy strategy_to_c(const toalift::Strategy& s) {
  toalift_strategy out{TOALIFT_STRATEGY_PLAIN, s.lifts, s.lambda0};
  if (s.kind == toalift::StrategyKind::Lifted) out.kind = TOALIFT_STRATEGY_LIFTED;
  if (s.kind == toalift::StrategyKind::LiftedRestart) out.kind = TOALIFT_STRATEGY_RESTART;
  return out;
}

toalift_termination termination_to_c(toalift::TerminationReason r) {
  switch (r) {
    case toalift::TerminationReason::FunctionTolerance: return TOALIFT_TERM_FUNCTION_TOLERANCE;
    case toalift::TerminationReason::StepTolerance: return TOALIFT_TERM_STEP_TOLERANCE;
    case toalift::TerminationReason::OptimalityTolerance: return TOALIFT_TERM_OPTIMALITY_TOLERANCE;
    case toalift::TerminationReason::MaxIterations: return TOALIFT_TERM_MAX_ITERATIONS;
    case toalift::TerminationReason::MaxFunctionEvals: return TOALIFT_TERM_MAX_FUNCTION_EVALS;
  }
  return TOALIFT_TERM_MAX_ITERATIONS;
}

}  // namespace

extern "C" {

uint32_t toalift_abi_version(void) { return TOALIFT_ABI_VERSION; }

const char* toalift_status_name(toalift_status status) {
  switch (status) {
    case TOALIFT_OK: return "ok";
    case TOALIFT_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case TOALIFT_ERR_GENERATION_FAILED: return "generation-failed";
    case TOALIFT_ERR_NON_FINITE: return "non-finite";
    case TOALIFT_ERR_IO: return "io";
    case TOALIFT_ERR_PARSE: return "parse";
    case TOALIFT_ERR_BUFFER_TOO_SMALL: return "buffer-too-small";
    case TOALIFT_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* toalift_last_error(void) { return g_last_error.c_str(); }

void toalift_string_free(char* s) { std::free(s); }

/* ---- scenarios ---- */

toalift_status toalift_scenario_create(int dim, const double* stations, size_t n_stations, const double* truth,
                                       toalift_scenario** out) {
  TOALIFT_REQUIRE(out && stations && truth, "null argument");
  TOALIFT_REQUIRE(dim == 2 || dim == 3, "dim must be 2 or 3");
  return guarded([&] {
    std::vector<toalift::Point> pts;
    for (size_t i = 0; i < n_stations; ++i) pts.push_back(point_from(stations + i * dim, dim));
    *out = new toalift_scenario{toalift::Scenario(dim, std::move(pts), point_from(truth, dim))};
    return TOALIFT_OK;
  });
}

toalift_status toalift_scenario_demo2d(toalift_scenario** out) {
  TOALIFT_REQUIRE(out, "null argument");
  return guarded([&] {
    *out = new toalift_scenario{toalift::demo_scenario()};
    return TOALIFT_OK;
  });
}

toalift_status toalift_scenario_generate(int dim, size_t n_stations, double cube_side, double min_normalized_sv,
                                         uint64_t seed, size_t max_attempts, toalift_scenario** out) {
  TOALIFT_REQUIRE(out, "null argument");
  return guarded([&] {
    std::optional<toalift::GeometryFilter> filter;
    if (min_normalized_sv > 0.0) filter = toalift::GeometryFilter{min_normalized_sv};
    toalift::Rng rng(seed);
    *out = new toalift_scenario{toalift::generate_scenario(
        dim, n_stations, cube_side, filter, rng,
        max_attempts == 0 ? toalift::kDefaultGenerationAttempts : max_attempts)};
    return TOALIFT_OK;
  });
}

void toalift_scenario_destroy(toalift_scenario* s) { delete s; }

int toalift_scenario_dim(const toalift_scenario* s) { return s ? s->value.dim() : 0; }

size_t toalift_scenario_station_count(const toalift_scenario* s) { return s ? s->value.station_count() : 0; }

toalift_status toalift_scenario_stations(const toalift_scenario* s, double* out, size_t capacity) {
  TOALIFT_REQUIRE(s, "null scenario");
  const auto dim = static_cast<size_t>(s->value.dim());
  const size_t need = dim * s->value.station_count();
  if (capacity < need) return copy_out(nullptr, need, out, capacity);
  TOALIFT_REQUIRE(out, "output buffer is null");
  for (size_t i = 0; i < s->value.station_count(); ++i)
    std::memcpy(out + i * dim, s->value.station(i).data(), dim * sizeof(double));
  return TOALIFT_OK;
}

toalift_status toalift_scenario_truth(const toalift_scenario* s, double* out, size_t capacity) {
  TOALIFT_REQUIRE(s, "null scenario");
  return copy_out(s->value.truth(), out, capacity);
}

toalift_status toalift_scenario_true_ranges(const toalift_scenario* s, double* out, size_t capacity) {
  TOALIFT_REQUIRE(s, "null scenario");
  return guarded([&] {
    const auto r = toalift::true_ranges(s->value);
    return copy_out(r.data(), r.size(), out, capacity);
  });
}

toalift_status toalift_geometry_ok(int dim, const double* stations, size_t n_stations, double min_normalized_sv,
                                   int* out_ok) {
  TOALIFT_REQUIRE(stations && out_ok, "null argument");
  TOALIFT_REQUIRE(dim >= 1, "dim must be >= 1");
  return guarded([&] {
    std::vector<toalift::Point> pts;
    for (size_t i = 0; i < n_stations; ++i) pts.push_back(point_from(stations + i * dim, dim));
    *out_ok = toalift::geometry_ok(pts, toalift::GeometryFilter{min_normalized_sv}) ? 1 : 0;
    return TOALIFT_OK;
  });
}

/* ---- measurements ---- */

toalift_status toalift_measurement_exact(const toalift_scenario* s, toalift_measurement** out) {
  TOALIFT_REQUIRE(s && out, "null argument");
  return guarded([&] {
    *out = new toalift_measurement{toalift::MeasurementSet::exact(toalift::true_ranges(s->value))};
    return TOALIFT_OK;
  });
}

toalift_status toalift_measurement_noisy(const toalift_scenario* s, double sigma, uint64_t seed,
                                         toalift_measurement** out) {
  TOALIFT_REQUIRE(s && out, "null argument");
  return guarded([&] {
    toalift::Rng rng(seed);
    const auto exact = toalift::true_ranges(s->value);
    *out = new toalift_measurement{toalift::apply_noise(exact, sigma, rng)};
    return TOALIFT_OK;
  });
}

toalift_status toalift_measurement_create(const double* ranges, const double* true_ranges, size_t n, double sigma,
                                          toalift_measurement** out) {
  TOALIFT_REQUIRE(ranges && true_ranges && out, "null argument");
  return guarded([&] {
    *out = new toalift_measurement{toalift::MeasurementSet(std::vector<double>(ranges, ranges + n),
                                                           std::vector<double>(true_ranges, true_ranges + n),
                                                           sigma)};
    return TOALIFT_OK;
  });
}

void toalift_measurement_destroy(toalift_measurement* m) { delete m; }

size_t toalift_measurement_count(const toalift_measurement* m) { return m ? m->value.size() : 0; }

double toalift_measurement_sigma(const toalift_measurement* m) { return m ? m->value.sigma() : 0.0; }

toalift_status toalift_measurement_ranges(const toalift_measurement* m, double* out, size_t capacity) {
  TOALIFT_REQUIRE(m, "null measurement");
  return copy_out(m->value.ranges().data(), m->value.size(), out, capacity);
}

toalift_status toalift_measurement_true_ranges(const toalift_measurement* m, double* out, size_t capacity) {
  TOALIFT_REQUIRE(m, "null measurement");
  return copy_out(m->value.true_ranges().data(), m->value.size(), out, capacity);
}

toalift_status toalift_scenario_to_json(const toalift_scenario* s, const toalift_measurement* m, char** out_json) {
  TOALIFT_REQUIRE(s && m && out_json, "null argument");
  return guarded([&] {
    *out_json = dup_string(toalift::scenario_to_json(s->value, m->value).dump(2));
    return TOALIFT_OK;
  });
}

toalift_status toalift_scenario_from_json(const char* json, toalift_scenario** out_scenario,
                                          toalift_measurement** out_measurement) {
  TOALIFT_REQUIRE(json && out_scenario && out_measurement, "null argument");
  return guarded([&] {
    auto [s, m] = toalift::scenario_from_json(nlohmann::json::parse(json));
    auto scenario = std::make_unique<toalift_scenario>(toalift_scenario{std::move(s)});
    *out_measurement = new toalift_measurement{std::move(m)};
    *out_scenario = scenario.release();
    return TOALIFT_OK;
  });
}

/* ---- objectives ---- */

toalift_status toalift_cost(toalift_objective objective, const toalift_scenario* s, const toalift_measurement* m,
                            const double* point, double* out_cost) {
  TOALIFT_REQUIRE(s && m && point && out_cost, "null argument");
  return guarded([&] {
    const auto kind = kind_from(objective);
    const int dim = s->value.dim();
    const toalift::EvalPoint p(point_from(point, dim),
                               Eigen::Map<const Eigen::VectorXd>(point + dim, kind.lifts()));
    *out_cost = toalift::cost(kind, p, s->value, m->value);
    return TOALIFT_OK;
  });
}

toalift_status toalift_curvature_indicator(const toalift_scenario* s, const toalift_measurement* m,
                                           const double* position, double* out_value, int* out_clamped) {
  TOALIFT_REQUIRE(s && m && position && out_value, "null argument");
  return guarded([&] {
    const auto ci = toalift::curvature_indicator(point_from(position, s->value.dim()), s->value, m->value);
    *out_value = ci.value;
    if (out_clamped) *out_clamped = ci.clamped ? 1 : 0;
    return TOALIFT_OK;
  });
}

toalift_status toalift_check_gradients(uint64_t seed, size_t points_per_kind, int corrupt,
                                       toalift_gradient_check* out, size_t capacity, size_t* out_count) {
  TOALIFT_REQUIRE(out_count, "null argument");
  return guarded([&] {
    const auto rows = toalift::check_gradients(seed, points_per_kind, corrupt != 0);
    *out_count = rows.size();
    if (capacity < rows.size())
      return fail(TOALIFT_ERR_BUFFER_TOO_SMALL, "need " + std::to_string(rows.size()) + " rows");
    if (!out) return fail(TOALIFT_ERR_INVALID_ARGUMENT, "output buffer is null");
    for (size_t i = 0; i < rows.size(); ++i) {
      out[i] = {objective_to_c(rows[i].kind), rows[i].points, rows[i].max_relative_error,
                rows[i].max_lambda_column_at_zero};
    }
    return TOALIFT_OK;
  });
}

double toalift_gradient_tolerance(void) { return toalift::kGradientCheckTolerance; }

/* ---- solver ---- */

toalift_lm_params toalift_lm_params_default(void) {
  const toalift::LmParams d;
  return {d.max_iterations,      0,
          d.function_tolerance,  d.step_tolerance,
          d.optimality_tolerance, d.initial_damping,
          d.damping_increase,    d.damping_decrease,
          TOALIFT_DAMPING_IDENTITY};
}

const char* toalift_termination_name(toalift_termination t) {
  switch (t) {
    case TOALIFT_TERM_FUNCTION_TOLERANCE: return toalift::to_string(toalift::TerminationReason::FunctionTolerance);
    case TOALIFT_TERM_STEP_TOLERANCE: return toalift::to_string(toalift::TerminationReason::StepTolerance);
    case TOALIFT_TERM_OPTIMALITY_TOLERANCE:
      return toalift::to_string(toalift::TerminationReason::OptimalityTolerance);
    case TOALIFT_TERM_MAX_ITERATIONS: return toalift::to_string(toalift::TerminationReason::MaxIterations);
    case TOALIFT_TERM_MAX_FUNCTION_EVALS: return toalift::to_string(toalift::TerminationReason::MaxFunctionEvals);
  }
  return "unknown";
}

toalift_status toalift_strategy_parse(const char* text, toalift_strategy* out) {
  TOALIFT_REQUIRE(text && out, "null argument");
  return guarded([&] {
    *out = strategy_to_c(toalift::Strategy::parse(text));
    return TOALIFT_OK;
  });
}

toalift_status toalift_strategy_format(const toalift_strategy* strategy, char* buffer, size_t capacity) {
  TOALIFT_REQUIRE(strategy && buffer, "null argument");
  return guarded([&] {
    const auto text = strategy_from(*strategy).to_string();
    if (capacity < text.size() + 1)
      return fail(TOALIFT_ERR_BUFFER_TOO_SMALL, "need " + std::to_string(text.size() + 1) + " bytes");
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    return TOALIFT_OK;
  });
}

toalift_status toalift_solve(const toalift_strategy* strategy, const toalift_scenario* s,
                             const toalift_measurement* m, const double* x0_position,
                             const toalift_lm_params* params, toalift_result** out) {
  TOALIFT_REQUIRE(strategy && s && m && x0_position && out, "null argument");
  return guarded([&] {
    auto result = toalift::solve_with_strategy(strategy_from(*strategy), s->value, m->value,
                                               point_from(x0_position, s->value.dim()), params_from(params));
    *out = new toalift_result{std::move(result)};
    return TOALIFT_OK;
  });
}

toalift_status toalift_lm_solve(toalift_objective objective, const toalift_scenario* s,
                                const toalift_measurement* m, const double* x0, const toalift_lm_params* params,
                                toalift_result** out) {
  TOALIFT_REQUIRE(s && m && x0 && out, "null argument");
  return guarded([&] {
    const auto kind = kind_from(objective);
    const int dim = s->value.dim();
    const toalift::EvalPoint start(point_from(x0, dim), Eigen::Map<const Eigen::VectorXd>(x0 + dim, kind.lifts()));
    *out = new toalift_result{toalift::lm_solve(kind, s->value, m->value, start, params_from(params))};
    return TOALIFT_OK;
  });
}

void toalift_result_destroy(toalift_result* r) { delete r; }

size_t toalift_result_dim(const toalift_result* r) {
  return r ? static_cast<size_t>(r->value.final_point.position.size()) : 0;
}

toalift_status toalift_result_position(const toalift_result* r, double* out, size_t capacity) {
  TOALIFT_REQUIRE(r, "null result");
  return copy_out(r->value.final_point.position, out, capacity);
}

size_t toalift_result_lambda_count(const toalift_result* r) {
  return r ? static_cast<size_t>(r->value.final_point.lambdas.size()) : 0;
}

toalift_status toalift_result_lambdas(const toalift_result* r, double* out, size_t capacity) {
  TOALIFT_REQUIRE(r, "null result");
  return copy_out(r->value.final_point.lambdas, out, capacity);
}

double toalift_result_cost(const toalift_result* r) { return r ? r->value.final_cost : NAN; }

toalift_termination toalift_result_termination(const toalift_result* r) {
  return r ? termination_to_c(r->value.reason) : TOALIFT_TERM_MAX_ITERATIONS;
}

int toalift_result_iterations(const toalift_result* r) { return r ? r->value.iterations : 0; }

int toalift_result_function_evals(const toalift_result* r) { return r ? r->value.function_evals : 0; }

int toalift_result_clamped(const toalift_result* r) { return r && r->value.clamp_flag ? 1 : 0; }

size_t toalift_result_trace_length(const toalift_result* r) { return r ? r->value.trace.size() : 0; }

toalift_status toalift_result_trace_point(const toalift_result* r, size_t index, double* position,
                                          size_t position_capacity, double* lambdas, size_t lambda_capacity,
                                          size_t* out_lambda_count, double* out_cost) {
  TOALIFT_REQUIRE(r, "null result");
  TOALIFT_REQUIRE(index < r->value.trace.size(), "trace index out of range");
  const auto& p = r->value.trace[index];
  if (out_lambda_count) *out_lambda_count = static_cast<size_t>(p.lambdas.size());
  if (out_cost) *out_cost = r->value.trace_costs[index];
  if (const auto st = copy_out(p.position, position, position_capacity); st != TOALIFT_OK) return st;
  if (lambda_capacity == 0 && lambdas == nullptr) return TOALIFT_OK;
  return copy_out(p.lambdas, lambdas, lambda_capacity);
}

toalift_status toalift_result_to_json(const toalift_result* r, char** out_json) {
  TOALIFT_REQUIRE(r && out_json, "null argument");
  return guarded([&] {
    *out_json = dup_string(toalift::solve_result_to_json(r->value).dump(2));
    return TOALIFT_OK;
  });
}

toalift_status toalift_result_write_trace_csv(const toalift_result* r, const char* path) {
  TOALIFT_REQUIRE(r && path, "null argument");
  return guarded([&] {
    toalift::write_text_file(path, toalift::trace_csv(r->value));
    return TOALIFT_OK;
  });
}

/* ---- experiments ---- */

toalift_experiment_config toalift_experiment_config_default(void) {
  const toalift::ExperimentConfig d;
  toalift_experiment_config c{};
  c.dim = d.dim;
  c.n_stations = d.n_stations;
  c.sigma = d.sigma;
  c.trials = d.trials;
  c.cube_side = d.cube_side;
  c.strategies = nullptr;
  c.strategy_count = 0;
  c.outlier_threshold = d.outlier_threshold;
  c.geometry_threshold = d.geometry_filter->min_normalized_singular_value;
  c.master_seed = d.master_seed;
  c.max_generation_attempts = d.max_generation_attempts;
  c.x0_max_offset = -1.0;
  c.lm = toalift_lm_params_default();
  return c;
}

toalift_status toalift_experiment_run(const toalift_experiment_config* config, size_t workers,
                                      toalift_experiment** out) {
  TOALIFT_REQUIRE(config && out, "null argument");
  TOALIFT_REQUIRE(config->strategy_count == 0 || config->strategies, "strategy list is null");
  return guarded([&] {
    toalift::ExperimentConfig c;
    c.dim = config->dim;
    c.n_stations = config->n_stations;
    c.sigma = config->sigma;
    c.trials = config->trials;
    c.cube_side = config->cube_side;
    if (config->strategy_count > 0) {
      c.strategies.clear();
      for (size_t i = 0; i < config->strategy_count; ++i) c.strategies.push_back(strategy_from(config->strategies[i]));
    }
    c.outlier_threshold = config->outlier_threshold;
    if (config->geometry_threshold > 0.0)
      c.geometry_filter = toalift::GeometryFilter{config->geometry_threshold};
    else
      c.geometry_filter.reset();
    c.master_seed = config->master_seed;
    c.max_generation_attempts = config->max_generation_attempts;
    if (config->x0_max_offset >= 0.0) c.x0_max_offset = config->x0_max_offset;
    c.lm = params_from(&config->lm);
    *out = new toalift_experiment{toalift::run_experiment(c, workers)};
    return TOALIFT_OK;
  });
}

void toalift_experiment_destroy(toalift_experiment* e) { delete e; }

size_t toalift_experiment_trial_count(const toalift_experiment* e) { return e ? e->value.trials.size() : 0; }

size_t toalift_experiment_strategy_count(const toalift_experiment* e) {
  return e ? e->value.config.strategies.size() : 0;
}

toalift_status toalift_experiment_summary(const toalift_experiment* e, size_t strategy_index, toalift_summary* out) {
  TOALIFT_REQUIRE(e && out, "null argument");
  TOALIFT_REQUIRE(strategy_index < e->value.summaries.size(), "strategy index out of range");
  const auto& s = e->value.summaries[strategy_index];
  *out = {s.trial_count,
          s.mean_error,
          s.std_error,
          s.outlier_count,
          s.mean_error_no_outliers.has_value() ? 1 : 0,
          s.mean_error_no_outliers.value_or(NAN),
          s.std_error_no_outliers.value_or(NAN)};
  return TOALIFT_OK;
}

toalift_status toalift_experiment_trial_error(const toalift_experiment* e, size_t trial_index,
                                              size_t strategy_index, double* out_error, int* out_outlier) {
  TOALIFT_REQUIRE(e && out_error, "null argument");
  TOALIFT_REQUIRE(trial_index < e->value.trials.size(), "trial index out of range");
  TOALIFT_REQUIRE(strategy_index < e->value.config.strategies.size(), "strategy index out of range");
  const auto& o = e->value.trials[trial_index].outcomes[strategy_index];
  *out_error = o.error;
  if (out_outlier) *out_outlier = o.outlier ? 1 : 0;
  return TOALIFT_OK;
}

toalift_status toalift_experiment_trial_position(const toalift_experiment* e, size_t trial_index,
                                                 size_t strategy_index, double* out, size_t capacity) {
  TOALIFT_REQUIRE(e, "null experiment");
  TOALIFT_REQUIRE(trial_index < e->value.trials.size(), "trial index out of range");
  TOALIFT_REQUIRE(strategy_index < e->value.config.strategies.size(), "strategy index out of range");
  return copy_out(e->value.trials[trial_index].outcomes[strategy_index].position, out, capacity);
}

toalift_status toalift_experiment_write_results_csv(const toalift_experiment* e, const char* path) {
  TOALIFT_REQUIRE(e && path, "null argument");
  return guarded([&] {
    toalift::write_text_file(path, toalift::results_csv(e->value));
    return TOALIFT_OK;
  });
}

toalift_status toalift_experiment_write_summary_csv(const toalift_experiment* e, const char* path) {
  TOALIFT_REQUIRE(e && path, "null argument");
  return guarded([&] {
    toalift::write_text_file(path, toalift::summary_csv(e->value));
    return TOALIFT_OK;
  });
}

toalift_status toalift_experiment_write_summary_json(const toalift_experiment* e, const char* path) {
  TOALIFT_REQUIRE(e && path, "null argument");
  return guarded([&] {
    toalift::write_text_file(path, toalift::summary_json(e->value).dump(2) + "\n");
    return TOALIFT_OK;
  });
}

toalift_status toalift_experiment_write_scatter_csv(const toalift_experiment* e, const char* path) {
  TOALIFT_REQUIRE(e && path, "null argument");
  return guarded([&] {
    toalift::write_text_file(path, toalift::scatter_csv(e->value));
    return TOALIFT_OK;
  });
}

}  // extern "C"
