// Acceptance suite. Prints one PASS/FAIL line per criterion plus detail and
// INFO lines. Usage: toalift_acceptance [N ...]   (no arguments: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "experiments.hpp"
#include "lm_solver.hpp"
#include "objectives.hpp"
#include "strategies.hpp"

using namespace toalift;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Check {
  std::string what;
  bool ok;
};

struct Outcome {
  std::vector<Check> checks;
  std::vector<std::string> info;

  void expect(bool ok, std::string what) { checks.push_back({std::move(what), ok}); }
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Point pt(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

ExperimentConfig protocol_config(double sigma, std::vector<Strategy> strategies) {
  ExperimentConfig c;
  c.dim = 2;
  c.n_stations = 4;
  c.sigma = sigma;
  c.trials = 2000;
  c.strategies = std::move(strategies);
  c.geometry_filter = GeometryFilter{};
  c.master_seed = kSeed;
  return c;
}

// The sigma = 0.01 run is shared by criteria 3 and 5 (same seeds).
const ExperimentResult& sigma001_run(double* elapsed = nullptr) {
  static double seconds = 0.0;
  static const ExperimentResult r = [] {
    const auto t0 = std::chrono::steady_clock::now();
    auto res = run_experiment(protocol_config(0.01, {Strategy::plain(), Strategy::lifted(1, 1.0),
                                                   Strategy::restart(1, 1.0)}),
                              0);
    seconds = seconds_since(t0);
    return res;
  }();
  if (elapsed) *elapsed = seconds;
  return r;
}

// 1. Demo reproduction.
Outcome criterion_demo() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario s = demo_scenario();
  const auto m = MeasurementSet::exact(true_ranges(s));
  const LmParams params;
  const auto plain = solve_with_strategy(Strategy::plain(), s, m, pt(2, -1), params);
  const auto lifted = solve_with_strategy(Strategy::lifted(1, 1.0), s, m, pt(2, -1), params);
  const double secs = seconds_since(t0);

  const double plain_dist = plain.final_point.position.norm();
  const double lifted_dist = (lifted.final_point.position - pt(1, 0)).norm();
  const double lam = std::abs(lifted.final_point.lambdas[0]);
  o.expect(plain_dist < 1e-3, fmt("plain from (2,-1) ends at (%.6g, %.6g); |p - (0,0)| = %.3g < 1e-3",
                                  plain.final_point.position[0], plain.final_point.position[1], plain_dist));
  o.expect(lifted_dist < 1e-3, fmt("lifted from (2,-1,1) ends at (%.6g, %.6g); |p - (1,0)| = %.3g < 1e-3",
                                   lifted.final_point.position[0], lifted.final_point.position[1], lifted_dist));
  o.expect(lam < 1e-3, fmt("lifted final |lambda| = %.3g < 1e-3", lam));
  o.expect(secs < 1.0, fmt("runtime %.3g s < 1 s", secs));

  const auto mp = solve_with_strategy(Strategy::plain(), s, m, pt(-2, -1), params);
  const auto ml = solve_with_strategy(Strategy::lifted(1, 1.0), s, m, pt(-2, -1), params);
  o.info.push_back(fmt("mirrored start (-2,-1): plain ends at (%.3g, %.3g), lifted ends at (%.6g, %.3g)",
                       mp.final_point.position[0], mp.final_point.position[1], ml.final_point.position[0],
                       ml.final_point.position[1]));
  return o;
}

// 2. Curvature indicator at the demo's spurious minimum.
Outcome criterion_curvature() {
  Outcome o;
  const Scenario s = demo_scenario();
  const auto m = MeasurementSet::exact(true_ranges(s));
  const auto ind = curvature_indicator(pt(0, 0), s, m);
  const double expected = 2.0 - std::sqrt(5.0);
  o.expect(std::abs(ind.value - expected) < 1e-10,
           fmt("indicator at (0,0) = %.12f, 2 - sqrt(5) = %.12f, |diff| = %.2g < 1e-10", ind.value, expected,
               std::abs(ind.value - expected)));

  // Richardson-extrapolated central second difference of the cost along lambda.
  const auto f = [&](double l) {
    Eigen::VectorXd lam(1);
    lam << l;
    return cost(ObjectiveKind::lifted_range(1), EvalPoint(pt(0, 0), lam), s, m);
  };
  const auto d2 = [&](double h) { return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h); };
  const double h = 1e-3;
  const double second = (4.0 * d2(h / 2.0) - d2(h)) / 3.0;
  const double rel = std::abs(second / 2.0 - ind.value) / std::abs(ind.value);
  o.expect(rel < 1e-4, fmt("finite-difference d2F/dlambda2 / 2 = %.10f, relative error %.2g < 1e-4", second / 2.0, rel));
  return o;
}

// 3. sigma = 0.01: outlier counts and accuracy.
Outcome criterion_sigma001() {
  Outcome o;
  double secs = 0.0;
  const auto& r = sigma001_run(&secs);
  const auto& plain = r.summaries[0];
  const auto& lifted = r.summaries[1];
  const double frac = static_cast<double>(plain.outlier_count) / static_cast<double>(plain.trial_count);
  o.expect(lifted.outlier_count == 0, fmt("lifted L = %zu == 0", lifted.outlier_count));
  o.expect(frac >= 0.05 && frac <= 0.30,
           fmt("plain outlier fraction %.4f (L = %zu / %zu) in [0.05, 0.30]", frac, plain.outlier_count,
               plain.trial_count));
  const double pm = plain.mean_error_no_outliers.value_or(NAN);
  const double lm = lifted.mean_error_no_outliers.value_or(NAN);
  o.expect(pm >= 0.02 && pm <= 0.05, fmt("plain mean error without outliers %.5f in [0.02, 0.05]", pm));
  o.expect(lm >= 0.02 && lm <= 0.06, fmt("lifted mean error without outliers %.5f in [0.02, 0.06]", lm));
  o.expect(secs < 120.0, fmt("runtime %.3g s < 120 s (3 strategies)", secs));
  o.info.push_back(fmt("plain %.5f +- %.5f, lifted %.5f +- %.5f (without outliers)", pm,
                       plain.std_error_no_outliers.value_or(NAN), lm, lifted.std_error_no_outliers.value_or(NAN)));
  return o;
}

// 4. Outlier ordering at sigma = 0.05 and 0.1.
Outcome criterion_ordering() {
  Outcome o;
  for (double sigma : {0.05, 0.1}) {
    const auto r = run_experiment(protocol_config(sigma, {Strategy::plain(), Strategy::lifted(1, 1.0)}), 0);
    const auto lp = r.summaries[0].outlier_count;
    const auto ll = r.summaries[1].outlier_count;
    if (sigma == 0.05) {
      o.expect(lp > 0 && 1.5 * static_cast<double>(ll) <= static_cast<double>(lp),
               fmt("sigma 0.05: lifted L = %zu, plain L = %zu, ratio %s >= 1.5", ll, lp,
                   ll == 0 ? "inf" : fmt("%.3g", static_cast<double>(lp) / static_cast<double>(ll)).c_str()));
    } else {
      o.expect(ll <= lp, fmt("sigma 0.1: lifted L = %zu <= plain L = %zu", ll, lp));
    }
  }
  return o;
}

// 5. Restart at sigma = 0.01.
Outcome criterion_restart() {
  Outcome o;
  const auto& r = sigma001_run();
  const auto& lifted = r.summaries[1];
  const auto& restart = r.summaries[2];
  o.expect(restart.outlier_count == 0, fmt("restart L = %zu == 0", restart.outlier_count));
  o.expect(restart.mean_error >= 0.015 && restart.mean_error <= 0.04,
           fmt("restart mean error %.5f in [0.015, 0.04]", restart.mean_error));
  o.expect(restart.mean_error < lifted.mean_error,
           fmt("restart mean error %.5f < lifted mean error %.5f (same seeds)", restart.mean_error,
               lifted.mean_error));
  return o;
}

struct KAgreement {
  double fraction;
  std::size_t outliers[3];
};

KAgreement k_agreement(double sigma, double tol) {
  ExperimentConfig c;
  c.dim = 2;
  c.n_stations = 10;
  c.sigma = sigma;
  c.trials = 500;
  c.geometry_filter.reset();
  c.strategies = {Strategy::lifted(1, 1.0), Strategy::lifted(2, 1.0), Strategy::lifted(3, 1.0)};
  c.master_seed = kSeed;
  const auto r = run_experiment(c, 0);
  std::size_t agree = 0;
  for (const auto& t : r.trials) {
    const double e1 = t.outcomes[0].error, e2 = t.outcomes[1].error, e3 = t.outcomes[2].error;
    if (std::abs(e1 - e2) <= tol && std::abs(e1 - e3) <= tol && std::abs(e2 - e3) <= tol) ++agree;
  }
  return {static_cast<double>(agree) / static_cast<double>(r.trials.size()),
          {r.summaries[0].outlier_count, r.summaries[1].outlier_count, r.summaries[2].outlier_count}};
}

// 6. Multiple lifting variables give the same results.
Outcome criterion_multi_lambda() {
  Outcome o;
  const double tol = 10.0 * LmParams{}.step_tolerance;
  const auto a = k_agreement(0.0, tol);
  o.expect(a.fraction >= 0.99, fmt("sigma 0: per-trial errors for k = 1,2,3 agree within %.0e on %.1f%% >= 99%% of "
                                   "500 trials", tol, 100.0 * a.fraction));

  Rng rng(kSeed);
  std::uniform_real_distribution<double> lam(-3.0, 3.0);
  std::uniform_int_distribution<int> kdist(2, 3);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const int dim = 2 + i % 2;
    const Scenario s = generate_scenario(dim, 10, 10.0, std::nullopt, rng);
    std::normal_distribution<double> noise(0.0, 0.1);
    auto d = true_ranges(s);
    for (double& x : d) x += noise(rng);
    const MeasurementSet m(d, true_ranges(s), 0.1);
    const int k = kdist(rng);
    Eigen::VectorXd l(k);
    for (int j = 0; j < k; ++j) l[j] = lam(rng);
    Eigen::VectorXd one(1);
    one << reduce_lambdas(l);
    const Point p = uniform_point(dim, 10.0, rng);
    const bool squared = i % 4 == 3;
    const auto kk = squared ? ObjectiveKind::lifted_squared(k) : ObjectiveKind::lifted_range(k);
    const auto k1 = squared ? ObjectiveKind::lifted_squared(1) : ObjectiveKind::lifted_range(1);
    const double ck = cost(kk, EvalPoint(p, l), s, m);
    const double c1 = cost(k1, EvalPoint(p, one), s, m);
    worst = std::max(worst, std::abs(ck - c1) / std::max(1.0, std::abs(c1)));
  }
  o.expect(worst <= 1e-13, fmt("multi-lambda cost identity over 1e5 evaluations: max relative difference %.2g <= 1e-13",
                               worst));

  const auto b = k_agreement(0.01, tol);
  o.info.push_back(fmt("sigma 0.01: k = 1,2,3 agree within %.0e on %.1f%% of trials; outliers %zu/%zu/%zu", tol,
                       100.0 * b.fraction, b.outliers[0], b.outliers[1], b.outliers[2]));
  return o;
}

// 7. Property suite.
Outcome criterion_properties() {
  Outcome o;
  double worst_grad = 0.0;
  for (const auto& row : check_gradients(kSeed, 100)) worst_grad = std::max(worst_grad, row.max_relative_error);
  o.expect(worst_grad < kGradientCheckTolerance,
           fmt("Jacobian vs finite differences, 7 kinds x 100 points: max relative error %.2g < 1e-6", worst_grad));

  Rng rng(kSeed);
  std::size_t monotone_fail = 0, budget_fail = 0;
  const std::vector<ObjectiveKind> kinds = {ObjectiveKind::plain_range(), ObjectiveKind::lifted_range(1),
                                            ObjectiveKind::lifted_range(2), ObjectiveKind::plain_squared(),
                                            ObjectiveKind::lifted_squared(1)};
  const LmParams params;
  for (int t = 0; t < 1000; ++t) {
    const int dim = 2 + t % 2;
    const Scenario s = generate_scenario(dim, 4 + static_cast<std::size_t>(t % 3), 10.0, GeometryFilter{}, rng);
    const auto m = apply_noise(true_ranges(s), 0.05, rng);
    const auto& kind = kinds[static_cast<std::size_t>(t) % kinds.size()];
    const EvalPoint x0(uniform_point(dim, 10.0, rng), Eigen::VectorXd::Constant(kind.lifts(), 1.0));
    const auto r = lm_solve(kind, s, m, x0, params);
    for (std::size_t i = 1; i < r.trace_costs.size(); ++i)
      if (!(r.trace_costs[i] < r.trace_costs[i - 1])) {
        ++monotone_fail;
        break;
      }
    if (r.iterations > params.max_iterations ||
        r.function_evals > params.function_eval_budget(kind.variable_count(dim)) || r.final_cost > r.trace_costs[0])
      ++budget_fail;
  }
  o.expect(monotone_fail == 0, fmt("LM cost strictly decreasing over accepted iterates: %zu/1000 violations",
                                   monotone_fail));
  o.expect(budget_fail == 0, fmt("LM iteration/evaluation budgets and final <= initial cost: %zu/1000 violations",
                                 budget_fail));

  std::size_t reduction_fail = 0;
  for (int t = 0; t < 200; ++t) {
    const Scenario s = generate_scenario(2, 4, 10.0, GeometryFilter{}, rng);
    const auto m = apply_noise(true_ranges(s), 0.05, rng);
    const Point x0 = uniform_point(2, 10.0, rng);
    const auto a = lm_solve(ObjectiveKind::plain_range(), s, m, EvalPoint(x0), params);
    const auto b = lm_solve(ObjectiveKind::lifted_range(1), s, m, EvalPoint(x0, Eigen::VectorXd::Zero(1)), params);
    bool same = a.trace.size() == b.trace.size();
    for (std::size_t i = 0; same && i < a.trace.size(); ++i)
      same = a.trace[i].position == b.trace[i].position && b.trace[i].lambdas[0] == 0.0;
    if (!same) ++reduction_fail;
  }
  o.expect(reduction_fail == 0,
           fmt("lambda=0 lifted solve equals plain solve iterate-by-iterate: %zu/200 mismatches", reduction_fail));

  ExperimentConfig c = protocol_config(0.05, {Strategy::plain(), Strategy::lifted(), Strategy::restart()});
  c.trials = 300;
  const auto base = run_experiment(c, 1);
  bool identical = true;
  for (std::size_t w : {4u, 16u}) {
    const auto other = run_experiment(c, w);
    for (std::size_t i = 0; i < base.summaries.size(); ++i) {
      const auto& x = base.summaries[i];
      const auto& y = other.summaries[i];
      identical = identical && x.mean_error == y.mean_error && x.std_error == y.std_error &&
                  x.outlier_count == y.outlier_count && x.mean_error_no_outliers == y.mean_error_no_outliers &&
                  x.std_error_no_outliers == y.std_error_no_outliers;
    }
  }
  o.expect(identical, "run_experiment summaries bit-identical under 1, 4 and 16 workers");
  return o;
}

// 8. Noiseless lifted solves never get trapped.
Outcome criterion_noiseless() {
  Outcome o;
  const auto r = run_experiment(protocol_config(0.0, {Strategy::lifted(1, 1.0)}), 0);
  o.expect(r.summaries[0].outlier_count == 0,
           fmt("sigma 0, M = 2000: lifted L = %zu == 0", r.summaries[0].outlier_count));
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::map<int, Criterion>& criteria() {
  static const std::map<int, Criterion> all = {
      {1, {"demo reproduction", criterion_demo}},
      {2, {"curvature indicator", criterion_curvature}},
      {3, {"sigma 0.01 outliers and accuracy", criterion_sigma001}},
      {4, {"outlier ordering at sigma 0.05 / 0.1", criterion_ordering}},
      {5, {"restart at sigma 0.01", criterion_restart}},
      {6, {"multiple lifting variables", criterion_multi_lambda}},
      {7, {"property suite", criterion_properties}},
      {8, {"noiseless lifted solves", criterion_noiseless}},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long n = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || !criteria().count(static_cast<int>(n))) {
      std::fprintf(stderr, "usage: %s [criterion 1-8 ...]\n", argv[0]);
      return 2;
    }
    selected.push_back(static_cast<int>(n));
  }
  if (selected.empty())
    for (const auto& [n, c] : criteria()) selected.push_back(n);

  int failed = 0;
  for (int n : selected) {
    const auto& c = criteria().at(n);
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %d: %s\n", o.passed() ? "PASS" : "FAIL", n, c.title);
    for (const auto& ch : o.checks) std::printf("    [%s] %s\n", ch.ok ? "ok" : "xx", ch.what.c_str());
    for (const auto& line : o.info) std::printf("    INFO %s\n", line.c_str());
    std::fflush(stdout);
    if (!o.passed()) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(selected.size()) - failed, selected.size());
  return failed == 0 ? 0 : 1;
}
