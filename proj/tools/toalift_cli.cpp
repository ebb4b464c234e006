// toalift command-line front end. Talks to the library through the C API only.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "toalift/toalift.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(toalift_status st, const std::string& what) {
  if (st != TOALIFT_OK)
    throw CliError(what + ": " + toalift_status_name(st) + ": " + toalift_last_error());
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ScenarioPtr = std::unique_ptr<toalift_scenario, Deleter<toalift_scenario, toalift_scenario_destroy>>;
using MeasurementPtr =
    std::unique_ptr<toalift_measurement, Deleter<toalift_measurement, toalift_measurement_destroy>>;
using ResultPtr = std::unique_ptr<toalift_result, Deleter<toalift_result, toalift_result_destroy>>;
using ExperimentPtr = std::unique_ptr<toalift_experiment, Deleter<toalift_experiment, toalift_experiment_destroy>>;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot read config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw CliError("config '" + path + "': " + e.what());
  }
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw CliError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw CliError("unknown key '" + key + "' in " + where);
  }
}

fs::path prepare_out_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw CliError("cannot create output directory '" + dir + "'");
  const fs::path probe = p / ".toalift-write-test";
  {
    std::ofstream out(probe);
    if (!out) throw CliError("output directory '" + dir + "' is not writable");
  }
  fs::remove(probe, ec);
  return p;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw CliError("failed writing '" + path.string() + "'");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError("bad number '" + item + "' in list '" + text + "'");
    }
  }
  return out;
}

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_strategy(const toalift_strategy& s) {
  char buf[128];
  check(toalift_strategy_format(&s, buf, sizeof buf), "strategy");
  return buf;
}

toalift_damping parse_damping(const std::string& name) {
  if (name == "identity") return TOALIFT_DAMPING_IDENTITY;
  if (name == "diag") return TOALIFT_DAMPING_JACOBIAN_DIAGONAL;
  throw CliError("damping must be 'identity' or 'diag'");
}

const char* damping_name(toalift_damping d) { return d == TOALIFT_DAMPING_IDENTITY ? "identity" : "diag"; }

json lm_params_json(const toalift_lm_params& p) {
  return {{"max_iterations", p.max_iterations},
          {"max_function_evals", p.max_function_evals > 0 ? json(p.max_function_evals) : json(nullptr)},
          {"function_tolerance", p.function_tolerance},
          {"step_tolerance", p.step_tolerance},
          {"optimality_tolerance", p.optimality_tolerance},
          {"initial_damping", p.initial_damping},
          {"damping_increase", p.damping_increase},
          {"damping_decrease", p.damping_decrease},
          {"damping", damping_name(p.damping)}};
}

void apply_lm_json(const json& j, toalift_lm_params& p) {
  reject_unknown_keys(j,
                      {"max_iterations", "max_function_evals", "function_tolerance", "step_tolerance",
                       "optimality_tolerance", "initial_damping", "damping_increase", "damping_decrease",
                       "damping"},
                      "lm");
  if (j.contains("max_iterations")) p.max_iterations = j["max_iterations"].get<int>();
  if (j.contains("max_function_evals"))
    p.max_function_evals = j["max_function_evals"].is_null() ? 0 : j["max_function_evals"].get<int>();
  if (j.contains("function_tolerance")) p.function_tolerance = j["function_tolerance"].get<double>();
  if (j.contains("step_tolerance")) p.step_tolerance = j["step_tolerance"].get<double>();
  if (j.contains("optimality_tolerance")) p.optimality_tolerance = j["optimality_tolerance"].get<double>();
  if (j.contains("initial_damping")) p.initial_damping = j["initial_damping"].get<double>();
  if (j.contains("damping_increase")) p.damping_increase = j["damping_increase"].get<double>();
  if (j.contains("damping_decrease")) p.damping_decrease = j["damping_decrease"].get<double>();
  if (j.contains("damping")) p.damping = parse_damping(j["damping"].get<std::string>());
}

std::vector<double> result_position(const toalift_result* r) {
  std::vector<double> pos(toalift_result_dim(r));
  check(toalift_result_position(r, pos.data(), pos.size()), "result position");
  return pos;
}

std::vector<double> result_lambdas(const toalift_result* r) {
  std::vector<double> lam(toalift_result_lambda_count(r));
  check(toalift_result_lambdas(r, lam.data(), lam.size()), "result lambdas");
  return lam;
}

json result_summary(const toalift_result* r, const std::string& strategy) {
  return {{"strategy", strategy},
          {"final_position", result_position(r)},
          {"final_lambdas", result_lambdas(r)},
          {"final_cost", toalift_result_cost(r)},
          {"termination", toalift_termination_name(toalift_result_termination(r))},
          {"iterations", toalift_result_iterations(r)},
          {"function_evals", toalift_result_function_evals(r)},
          {"clamped", toalift_result_clamped(r) != 0}};
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + g6(v[i]);
  return out;
}

// ---- demo2d ------------------------------------------------------------

struct DemoOptions {
  std::string out = "out";
  std::string x0 = "2,-1";
  double lambda0 = 1.0;
  std::string damping = "identity";
};

int run_demo(const DemoOptions& opt) {
  const fs::path out = prepare_out_dir(opt.out);
  const auto x0 = parse_list(opt.x0);
  if (x0.size() != 2) throw CliError("--x0 needs two coordinates");

  toalift_scenario* raw_s = nullptr;
  check(toalift_scenario_demo2d(&raw_s), "demo scenario");
  ScenarioPtr s(raw_s);
  toalift_measurement* raw_m = nullptr;
  check(toalift_measurement_exact(s.get(), &raw_m), "demo measurement");
  MeasurementPtr m(raw_m);

  toalift_lm_params params = toalift_lm_params_default();
  params.damping = parse_damping(opt.damping);

  const toalift_strategy plain{TOALIFT_STRATEGY_PLAIN, 0, 0.0};
  const toalift_strategy lifted{TOALIFT_STRATEGY_LIFTED, 1, opt.lambda0};

  json summary = json::array();
  for (const auto& [strategy, file] : {std::pair{plain, "plain_trace.csv"}, std::pair{lifted, "lifted_trace.csv"}}) {
    toalift_result* raw_r = nullptr;
    check(toalift_solve(&strategy, s.get(), m.get(), x0.data(), &params, &raw_r), "demo solve");
    ResultPtr r(raw_r);
    check(toalift_result_write_trace_csv(r.get(), (out / file).string().c_str()), "trace csv");
    const auto name = format_strategy(strategy);
    summary.push_back(result_summary(r.get(), name));
    std::cout << name << ": position (" << join(result_position(r.get())) << ")";
    if (toalift_result_lambda_count(r.get()) > 0) std::cout << " lambda (" << join(result_lambdas(r.get())) << ")";
    std::cout << " cost " << g6(toalift_result_cost(r.get())) << " ["
              << toalift_termination_name(toalift_result_termination(r.get())) << ", "
              << toalift_result_iterations(r.get()) << " iterations]\n";
  }
  write_json(out / "demo_summary.json", summary);
  write_json(out / "config.json", {{"subcommand", "demo2d"},
                                   {"x0", x0},
                                   {"lambda0", opt.lambda0},
                                   {"lm", lm_params_json(params)}});
  return 0;
}

// ---- curvature ---------------------------------------------------------

struct CurvatureOptions {
  std::string config;
  std::string point;
  double range_offset = 0.0;
  std::string out;
};

int run_curvature(const CurvatureOptions& opt) {
  ScenarioPtr s;
  MeasurementPtr m;
  std::vector<double> point{0.0, 0.0};

  if (!opt.config.empty()) {
    json j = read_json_file(opt.config);
    if (j.is_object() && j.contains("point")) {
      point = j["point"].get<std::vector<double>>();
      j.erase("point");
    }
    toalift_scenario* raw_s = nullptr;
    toalift_measurement* raw_m = nullptr;
    check(toalift_scenario_from_json(j.dump().c_str(), &raw_s, &raw_m), "scenario config");
    s.reset(raw_s);
    m.reset(raw_m);
  } else {
    toalift_scenario* raw_s = nullptr;
    check(toalift_scenario_demo2d(&raw_s), "demo scenario");
    s.reset(raw_s);
    toalift_measurement* raw_m = nullptr;
    check(toalift_measurement_exact(s.get(), &raw_m), "demo measurement");
    m.reset(raw_m);
  }
  if (!opt.point.empty()) point = parse_list(opt.point);
  if (point.size() != static_cast<std::size_t>(toalift_scenario_dim(s.get())))
    throw CliError("evaluation point dimension does not match the scenario");

  if (opt.range_offset != 0.0) {
    const std::size_t n = toalift_measurement_count(m.get());
    std::vector<double> ranges(n), exact(n);
    check(toalift_measurement_ranges(m.get(), ranges.data(), n), "ranges");
    check(toalift_measurement_true_ranges(m.get(), exact.data(), n), "ranges");
    for (double& r : ranges) r += opt.range_offset;
    toalift_measurement* raw_m = nullptr;
    check(toalift_measurement_create(ranges.data(), exact.data(), n, toalift_measurement_sigma(m.get()), &raw_m),
          "shifted measurement");
    m.reset(raw_m);
  }

  double value = 0.0;
  int clamped = 0;
  check(toalift_curvature_indicator(s.get(), m.get(), point.data(), &value, &clamped), "curvature");
  const char* verdict = value < 0.0 ? "saddle (escape direction exists)" : "possibly trapped";
  std::cout << "point (" << join(point) << ")\n"
            << "curvature indicator " << g6(value) << "\n"
            << "second derivative along lambda " << g6(2.0 * value) << "\n"
            << "classification: " << verdict << "\n";
  if (clamped) std::cout << "warning: point coincides with a station; denominator clamped\n";

  if (!opt.out.empty()) {
    const fs::path out = prepare_out_dir(opt.out);
    write_json(out / "curvature.json", {{"point", point},
                                        {"indicator", value},
                                        {"second_derivative", 2.0 * value},
                                        {"classification", verdict},
                                        {"clamped", clamped != 0}});
    char* scenario_json = nullptr;
    check(toalift_scenario_to_json(s.get(), m.get(), &scenario_json), "scenario json");
    json cfg = json::parse(scenario_json);
    toalift_string_free(scenario_json);
    write_json(out / "config.json", {{"subcommand", "curvature"},
                                     {"scenario", cfg},
                                     {"point", point},
                                     {"range_offset", opt.range_offset}});
  }
  return 0;
}

// ---- montecarlo --------------------------------------------------------

struct MonteCarloOptions {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<double> sigma;
  std::optional<std::size_t> stations;
  std::optional<int> dim;
  std::vector<std::string> strategies;
  std::optional<std::size_t> workers;
  bool no_geometry_filter = false;
  std::optional<double> x0_max_offset;
  std::optional<double> outlier_threshold;
  std::optional<std::string> damping;
};

int run_montecarlo(const MonteCarloOptions& opt) {
  toalift_experiment_config cfg = toalift_experiment_config_default();
  std::vector<std::string> strategy_names{"plain", "lifted:k=1,lambda0=1"};
  std::size_t workers = 1;

  if (!opt.config.empty()) {
    const json j = read_json_file(opt.config);
    reject_unknown_keys(j,
                        {"subcommand", "dim", "stations", "sigma", "trials", "cube_side", "strategies", "outlier_threshold",
                         "geometry_filter", "seed", "workers", "x0_max_offset", "max_generation_attempts", "lm"},
                        "montecarlo config");
    if (j.contains("subcommand") && j["subcommand"] != "montecarlo")
      throw CliError("config was written for subcommand " + j["subcommand"].dump());
    if (j.contains("dim")) cfg.dim = j["dim"].get<int>();
    if (j.contains("stations")) cfg.n_stations = j["stations"].get<std::size_t>();
    if (j.contains("sigma")) cfg.sigma = j["sigma"].get<double>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<std::size_t>();
    if (j.contains("cube_side")) cfg.cube_side = j["cube_side"].get<double>();
    if (j.contains("strategies")) strategy_names = j["strategies"].get<std::vector<std::string>>();
    if (j.contains("outlier_threshold")) cfg.outlier_threshold = j["outlier_threshold"].get<double>();
    if (j.contains("geometry_filter"))
      cfg.geometry_threshold = j["geometry_filter"].is_null() ? 0.0 : j["geometry_filter"].get<double>();
    if (j.contains("seed")) cfg.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("workers")) workers = j["workers"].get<std::size_t>();
    if (j.contains("x0_max_offset"))
      cfg.x0_max_offset = j["x0_max_offset"].is_null() ? -1.0 : j["x0_max_offset"].get<double>();
    if (j.contains("max_generation_attempts"))
      cfg.max_generation_attempts = j["max_generation_attempts"].get<std::size_t>();
    if (j.contains("lm")) apply_lm_json(j["lm"], cfg.lm);
  }
  if (opt.seed) cfg.master_seed = *opt.seed;
  if (opt.trials) cfg.trials = *opt.trials;
  if (opt.sigma) cfg.sigma = *opt.sigma;
  if (opt.stations) cfg.n_stations = *opt.stations;
  if (opt.dim) cfg.dim = *opt.dim;
  if (!opt.strategies.empty()) strategy_names = opt.strategies;
  if (opt.workers) workers = *opt.workers;
  if (opt.no_geometry_filter) cfg.geometry_threshold = 0.0;
  if (opt.x0_max_offset) cfg.x0_max_offset = *opt.x0_max_offset;
  if (opt.outlier_threshold) cfg.outlier_threshold = *opt.outlier_threshold;
  if (opt.damping) cfg.lm.damping = parse_damping(*opt.damping);

  std::vector<toalift_strategy> strategies(strategy_names.size());
  for (std::size_t i = 0; i < strategy_names.size(); ++i)
    check(toalift_strategy_parse(strategy_names[i].c_str(), &strategies[i]), "strategy '" + strategy_names[i] + "'");
  cfg.strategies = strategies.data();
  cfg.strategy_count = strategies.size();

  const fs::path out = prepare_out_dir(opt.out);
  std::vector<std::string> canonical;
  for (const auto& s : strategies) canonical.push_back(format_strategy(s));
  write_json(out / "config.json",
             {{"subcommand", "montecarlo"},
              {"dim", cfg.dim},
              {"stations", cfg.n_stations},
              {"sigma", cfg.sigma},
              {"trials", cfg.trials},
              {"cube_side", cfg.cube_side},
              {"strategies", canonical},
              {"outlier_threshold", cfg.outlier_threshold},
              {"geometry_filter", cfg.geometry_threshold > 0.0 ? json(cfg.geometry_threshold) : json(nullptr)},
              {"seed", cfg.master_seed},
              {"workers", workers},
              {"x0_max_offset", cfg.x0_max_offset >= 0.0 ? json(cfg.x0_max_offset) : json(nullptr)},
              {"max_generation_attempts", cfg.max_generation_attempts},
              {"lm", lm_params_json(cfg.lm)}});

  toalift_experiment* raw_e = nullptr;
  check(toalift_experiment_run(&cfg, workers, &raw_e), "experiment");
  ExperimentPtr e(raw_e);
  check(toalift_experiment_write_results_csv(e.get(), (out / "results.csv").string().c_str()), "results.csv");
  check(toalift_experiment_write_summary_csv(e.get(), (out / "summary.csv").string().c_str()), "summary.csv");
  check(toalift_experiment_write_summary_json(e.get(), (out / "summary.json").string().c_str()), "summary.json");
  check(toalift_experiment_write_scatter_csv(e.get(), (out / "scatter.csv").string().c_str()), "scatter.csv");

  std::printf("%-28s %8s %8s %12s %12s %7s %12s %12s\n", "strategy", "sigma", "M", "mean", "std", "L",
              "mean(no-out)", "std(no-out)");
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    toalift_summary row{};
    check(toalift_experiment_summary(e.get(), i, &row), "summary");
    std::printf("%-28s %8s %8zu %12s %12s %7zu %12s %12s\n", canonical[i].c_str(), g6(cfg.sigma).c_str(),
                row.trial_count, g6(row.mean_error).c_str(), g6(row.std_error).c_str(), row.outlier_count,
                row.has_no_outlier_stats ? g6(row.mean_error_no_outliers).c_str() : "-",
                row.has_no_outlier_stats ? g6(row.std_error_no_outliers).c_str() : "-");
  }
  return 0;
}

// ---- check-gradients ---------------------------------------------------

struct GradientOptions {
  std::uint64_t seed = 1;
  std::size_t points = 100;
  bool corrupt = false;
};

int run_check_gradients(const GradientOptions& opt) {
  std::vector<toalift_gradient_check> rows(16);
  std::size_t count = 0;
  check(toalift_check_gradients(opt.seed, opt.points, opt.corrupt ? 1 : 0, rows.data(), rows.size(), &count),
        "gradient check");
  rows.resize(count);

  const double tol = toalift_gradient_tolerance();
  bool ok = true;
  std::printf("%-10s %5s %7s %14s %16s\n", "form", "lifts", "points", "max rel err", "max |fd lambda|");
  for (const auto& r : rows) {
    const bool row_ok = r.max_relative_error < tol && r.max_lambda_column_at_zero < 1e-8;
    ok = ok && row_ok;
    std::printf("%-10s %5d %7zu %14s %16s %s\n", r.objective.form == TOALIFT_OBJECTIVE_RANGE ? "range" : "squared",
                r.objective.lifts, r.points, g6(r.max_relative_error).c_str(),
                r.objective.lifts > 0 ? g6(r.max_lambda_column_at_zero).c_str() : "-", row_ok ? "ok" : "FAIL");
  }
  std::printf("%s (tolerance %s)\n", ok ? "all Jacobians agree" : "Jacobian mismatch", g6(tol).c_str());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-of-arrival lateration with dimension-lifted objectives"};
  app.require_subcommand(1);

  DemoOptions demo;
  auto* demo_cmd = app.add_subcommand("demo2d", "Three-anchor 2-D demo: plain vs lifted iterate traces");
  demo_cmd->add_option("--out", demo.out, "Output directory")->capture_default_str();
  demo_cmd->add_option("--x0", demo.x0, "Initial position x,y")->capture_default_str();
  demo_cmd->add_option("--lambda0", demo.lambda0, "Initial lifting variable")->capture_default_str();
  demo_cmd->add_option("--damping", demo.damping, "identity | diag")->capture_default_str();

  CurvatureOptions curv;
  auto* curv_cmd = app.add_subcommand("curvature", "Lambda-curvature indicator at a point");
  curv_cmd->add_option("--config", curv.config, "Scenario JSON (optionally with \"point\")");
  curv_cmd->add_option("--point", curv.point, "Evaluation point x,y[,z] (default 0,0)");
  curv_cmd->add_option("--range-offset", curv.range_offset, "Added to every measured range");
  curv_cmd->add_option("--out", curv.out, "Output directory (optional)");

  MonteCarloOptions mc;
  auto* mc_cmd = app.add_subcommand("montecarlo", "Monte Carlo comparison of solve strategies");
  mc_cmd->add_option("--config", mc.config, "Experiment config JSON");
  mc_cmd->add_option("--out", mc.out, "Output directory")->capture_default_str();
  mc_cmd->add_option("--seed", mc.seed, "Master seed");
  mc_cmd->add_option("--trials", mc.trials, "Number of trials M");
  mc_cmd->add_option("--sigma", mc.sigma, "Range noise standard deviation");
  mc_cmd->add_option("--stations", mc.stations, "Number of base stations");
  mc_cmd->add_option("--dim", mc.dim, "Spatial dimension (2 or 3)");
  mc_cmd->add_option("--strategy", mc.strategies, "plain | lifted:k=1,lambda0=1 | restart:k=1,lambda0=1 (repeatable)")
      ->delimiter('\0');
  mc_cmd->add_option("--workers", mc.workers, "Worker threads (0 = all cores)");
  mc_cmd->add_flag("--no-geometry-filter", mc.no_geometry_filter, "Accept any station constellation");
  mc_cmd->add_option("--x0-max-offset", mc.x0_max_offset, "Draw x0 within this offset of the truth");
  mc_cmd->add_option("--outlier-threshold", mc.outlier_threshold, "Error above which a trial is an outlier");
  mc_cmd->add_option("--damping", mc.damping, "identity | diag");

  GradientOptions grad;
  auto* grad_cmd = app.add_subcommand("check-gradients", "Analytic vs finite-difference Jacobians");
  grad_cmd->add_option("--seed", grad.seed, "Random seed")->capture_default_str();
  grad_cmd->add_option("--points", grad.points, "Points per objective kind")->capture_default_str();
  grad_cmd->add_flag("--corrupt-jacobian", grad.corrupt, "Perturb the analytic Jacobian (negative control)")
      ->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*demo_cmd) return run_demo(demo);
    if (*curv_cmd) return run_curvature(curv);
    if (*mc_cmd) return run_montecarlo(mc);
    if (*grad_cmd) return run_check_gradients(grad);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
