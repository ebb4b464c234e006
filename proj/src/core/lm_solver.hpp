#pragma once

// Levenberg-Marquardt least-squares minimizer.
//
// Each iteration solves the damped normal equations
//
//   (J^T J + mu * D) delta = -J^T r
//
// with D = I by default or D = diag(J^T J) on request, and accepts x + delta
// only if it strictly lowers the cost. Accepted steps divide mu by
// `damping_decrease`, rejected steps multiply it by `damping_increase` and
// retry from the same x. Every trial point costs one function evaluation; the
// initial point costs one as well.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "model.hpp"
#include "objectives.hpp"

namespace toalift {

/// Diagonal used for the damping term mu * D.
enum class DampingScaling {
  Identity,           ///< D = I
  JacobianDiagonal,   ///< D = diag(J^T J), floored at 1e-12
};

struct LmParams {
  int max_iterations = 400;
  /// Unset means 100 * number of variables.
  std::optional<int> max_function_evals;
  double function_tolerance = 1e-6;
  double step_tolerance = 1e-6;
  double optimality_tolerance = 1e-4;
  double initial_damping = 1e-2;
  double damping_increase = 10.0;
  double damping_decrease = 10.0;
  DampingScaling scaling = DampingScaling::Identity;

  void validate() const;
  int function_eval_budget(std::size_t variables) const;
};

enum class TerminationReason {
  FunctionTolerance,
  StepTolerance,
  OptimalityTolerance,
  MaxIterations,
  MaxFunctionEvals,
};

const char* to_string(TerminationReason reason);

/// Residual vector and Jacobian of a least-squares problem over a flat
/// variable vector.
class ResidualFunction {
 public:
  virtual ~ResidualFunction() = default;
  virtual std::size_t variable_count() const = 0;
  virtual Eigen::VectorXd residuals(const Eigen::VectorXd& x) const = 0;
  /// Sets `clamped` when a denominator safeguard fired; never clears it.
  virtual Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, bool& clamped) const = 0;
};

/// Adapts a lateration objective to the flat-vector interface.
class LaterationProblem final : public ResidualFunction {
 public:
  LaterationProblem(ObjectiveKind kind, const Scenario& s, const MeasurementSet& m)
      : kind_(kind), scenario_(s), measurement_(m) {}

  std::size_t variable_count() const override {
    return kind_.variable_count(scenario_.dim());
  }
  Eigen::VectorXd residuals(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, bool& clamped) const override;

  const ObjectiveKind& kind() const noexcept { return kind_; }
  int dim() const noexcept { return scenario_.dim(); }

 private:
  ObjectiveKind kind_;
  const Scenario& scenario_;
  const MeasurementSet& measurement_;
};

struct LmRun {
  Eigen::VectorXd x;
  double cost = 0.0;
  TerminationReason reason = TerminationReason::MaxIterations;
  int iterations = 0;
  int function_evals = 0;
  std::vector<Eigen::VectorXd> trace;
  std::vector<double> trace_costs;
  bool clamped = false;
};

LmRun minimize(const ResidualFunction& f, const Eigen::VectorXd& x0, const LmParams& params);

/// Iteration/evaluation counts of one solver stage.
struct StageSummary {
  std::string objective;
  TerminationReason reason = TerminationReason::MaxIterations;
  int iterations = 0;
  int function_evals = 0;
};

struct SolveResult {
  EvalPoint final_point;
  double final_cost = 0.0;
  TerminationReason reason = TerminationReason::MaxIterations;
  int iterations = 0;
  int function_evals = 0;
  std::vector<EvalPoint> trace;
  std::vector<double> trace_costs;
  bool clamp_flag = false;
  /// One entry for single-stage solves, one per stage for restarts.
  std::vector<StageSummary> stages;
};

SolveResult lm_solve(const ObjectiveKind& kind, const Scenario& s, const MeasurementSet& m,
                     const EvalPoint& x0, const LmParams& params);

/// Central differences with step h * max(1, |x_j|) per variable.
Eigen::MatrixXd finite_diff_jacobian(const ResidualFunction& f, const Eigen::VectorXd& x, double h);

Eigen::MatrixXd finite_diff_jacobian(const ObjectiveKind& kind, const EvalPoint& p,
                                     const Scenario& s, const MeasurementSet& m, double h);

}  // namespace toalift
