#pragma once

// JSON and CSV encodings for scenarios, solve results and experiment output.

#include <filesystem>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "experiments.hpp"
#include "lm_solver.hpp"
#include "model.hpp"

namespace toalift {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

nlohmann::json scenario_to_json(const Scenario& s, const MeasurementSet& m);
std::pair<Scenario, MeasurementSet> scenario_from_json(const nlohmann::json& j);

nlohmann::json solve_result_to_json(const SolveResult& r);

/// Header: iter,x,y[,z][,lambda | ,lambda1..lambdaK],cost
std::string trace_csv(const SolveResult& r);

/// trial_index,strategy,sigma,error,outlier,termination,iterations
std::string results_csv(const ExperimentResult& e);
/// strategy,sigma,trials,mean,std,L,mean_no_outliers,std_no_outliers
std::string summary_csv(const ExperimentResult& e);
nlohmann::json summary_json(const ExperimentResult& e);
/// trial_index followed by one error column per strategy.
std::string scatter_csv(const ExperimentResult& e);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace toalift
