#pragma once

// Monte Carlo harness: random constellations, noisy ranges, random initial
// estimates, and per-strategy error statistics over many trials.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lm_solver.hpp"
#include "model.hpp"
#include "strategies.hpp"

namespace toalift {

struct ExperimentConfig {
  int dim = 2;
  std::size_t n_stations = 4;
  double sigma = 0.01;
  std::size_t trials = 10000;
  double cube_side = 10.0;
  std::vector<Strategy> strategies{Strategy::plain(), Strategy::lifted()};
  double outlier_threshold = 0.5;
  std::optional<GeometryFilter> geometry_filter = GeometryFilter{};
  std::uint64_t master_seed = 1;
  std::size_t max_generation_attempts = kDefaultGenerationAttempts;
  /// When set, x0 = truth + uniform offset in [-r, r]^dim instead of a
  /// uniform draw in the cube. Debug aid for noiseless convergence checks.
  std::optional<double> x0_max_offset;
  LmParams lm;

  void validate() const;
};

struct StrategyOutcome {
  Point position;
  double error = 0.0;
  bool outlier = false;
  TerminationReason reason = TerminationReason::MaxIterations;
  int iterations = 0;
  int function_evals = 0;
  double final_cost = 0.0;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  Scenario scenario;
  MeasurementSet measurement;
  Point x0;
  /// Same order as ExperimentConfig::strategies.
  std::vector<StrategyOutcome> outcomes;
};

struct SummaryStats {
  std::size_t trial_count = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  std::size_t outlier_count = 0;
  /// Absent when every trial is an outlier.
  std::optional<double> mean_error_no_outliers;
  std::optional<double> std_error_no_outliers;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  /// Same order as config.strategies.
  std::vector<SummaryStats> summaries;
};

double error_of(const Point& estimate, const Point& truth);

/// splitmix64 finalizer over (master_seed, trial_index).
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index);

TrialRecord run_trial(const ExperimentConfig& config, std::size_t trial_index);

/// Runs all trials on up to `workers` threads (0 = hardware concurrency).
/// Results do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers = 1);

/// Population mean/std, outlier count (error > threshold) and the same
/// statistics over the non-outliers.
SummaryStats summarize(std::span<const double> errors, double threshold);

}  // namespace toalift
