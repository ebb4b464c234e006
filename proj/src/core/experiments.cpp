#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace toalift {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void require(bool cond, const char* msg) {
  if (!cond) throw Error(ErrorCode::InvalidArgument, msg);
}

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments population_moments(const std::vector<double>& values) {
  Moments m;
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.std = std::sqrt(ss / static_cast<double>(values.size()));
  return m;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(dim == 2 || dim == 3, "dim must be 2 or 3");
  require(n_stations >= static_cast<std::size_t>(dim) + 1, "need at least dim+1 stations");
  require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be >= 0");
  require(trials >= 1, "trials must be >= 1");
  require(std::isfinite(cube_side) && cube_side > 0.0, "cube_side must be > 0");
  require(!strategies.empty(), "at least one strategy is required");
  require(std::isfinite(outlier_threshold) && outlier_threshold > 0.0,
          "outlier_threshold must be > 0");
  require(max_generation_attempts >= 1, "max_generation_attempts must be >= 1");
  require(!x0_max_offset || (std::isfinite(*x0_max_offset) && *x0_max_offset >= 0.0),
          "x0_max_offset must be >= 0");
  if (geometry_filter) geometry_filter->validate();
  for (const auto& s : strategies) s.validate();
  lm.validate();
}

double error_of(const Point& estimate, const Point& truth) {
  return euclidean_distance(estimate, truth);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
  return splitmix64(master_seed ^ splitmix64(trial_index));
}

TrialRecord run_trial(const ExperimentConfig& config, std::size_t trial_index) {
  require(trial_index < config.trials, "trial index out of range");
  Rng rng(trial_seed(config.master_seed, trial_index));

  Scenario scenario = [&] {
    try {
      return generate_scenario(config.dim, config.n_stations, config.cube_side,
                               config.geometry_filter, rng, config.max_generation_attempts);
    } catch (const Error& e) {
      throw Error(e.code(), "trial " + std::to_string(trial_index) + ": " + e.what());
    }
  }();
  const auto exact = true_ranges(scenario);
  MeasurementSet measurement = apply_noise(exact, config.sigma, rng);

  Point x0;
  if (config.x0_max_offset) {
    std::uniform_real_distribution<double> offset(-*config.x0_max_offset, *config.x0_max_offset);
    x0 = scenario.truth();
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] += offset(rng);
  } else {
    x0 = uniform_point(config.dim, config.cube_side, rng);
  }

  TrialRecord record{trial_index, std::move(scenario), std::move(measurement), std::move(x0), {}};
  record.outcomes.reserve(config.strategies.size());
  for (const auto& strategy : config.strategies) {
    SolveResult solved =
        solve_with_strategy(strategy, record.scenario, record.measurement, record.x0, config.lm);
    StrategyOutcome o;
    o.position = solved.final_point.position;
    o.error = error_of(o.position, record.scenario.truth());
    o.outlier = o.error > config.outlier_threshold;
    o.reason = solved.reason;
    o.iterations = solved.iterations;
    o.function_evals = solved.function_evals;
    o.final_cost = solved.final_cost;
    record.outcomes.push_back(std::move(o));
  }
  return record;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.trials);

  std::vector<std::optional<TrialRecord>> slots(config.trials);
  std::vector<std::exception_ptr> failures(config.trials);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.trials || abort.load()) return;
      try {
        slots[i].emplace(run_trial(config, i));
      } catch (...) {
        failures[i] = std::current_exception();
        abort.store(true);
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  ExperimentResult result;
  result.config = config;
  result.trials.reserve(config.trials);
  for (auto& slot : slots) result.trials.push_back(std::move(*slot));

  std::vector<double> errors(config.trials);
  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    for (std::size_t t = 0; t < config.trials; ++t) errors[t] = result.trials[t].outcomes[s].error;
    result.summaries.push_back(summarize(errors, config.outlier_threshold));
  }
  return result;
}

SummaryStats summarize(std::span<const double> errors, double threshold) {
  require(!errors.empty(), "cannot summarize an empty error list");
  require(threshold > 0.0, "outlier threshold must be > 0");

  SummaryStats out;
  out.trial_count = errors.size();
  const std::vector<double> all(errors.begin(), errors.end());
  const auto everything = population_moments(all);
  out.mean_error = everything.mean;
  out.std_error = everything.std;

  std::vector<double> inliers;
  inliers.reserve(all.size());
  for (double e : all) {
    if (e > threshold)
      ++out.outlier_count;
    else
      inliers.push_back(e);
  }
  if (!inliers.empty()) {
    const auto kept = population_moments(inliers);
    out.mean_error_no_outliers = kept.mean;
    out.std_error_no_outliers = kept.std;
  }
  return out;
}

}  // namespace toalift
