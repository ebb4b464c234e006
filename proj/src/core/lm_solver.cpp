#include "lm_solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

namespace toalift {

namespace {

// Floor for diag(J^T J) so a flat direction (e.g. lambda = 0) still gets a
// positive damping term.
constexpr double kMinDiagonal = 1e-12;

void require(bool cond, const char* msg) {
  if (!cond) throw Error(ErrorCode::InvalidArgument, msg);
}

}  // namespace

void LmParams::validate() const {
  require(max_iterations >= 0, "max_iterations must be >= 0");
  require(!max_function_evals || *max_function_evals >= 1, "max_function_evals must be >= 1");
  require(function_tolerance > 0.0, "function_tolerance must be > 0");
  require(step_tolerance > 0.0, "step_tolerance must be > 0");
  require(optimality_tolerance > 0.0, "optimality_tolerance must be > 0");
  require(initial_damping > 0.0, "initial_damping must be > 0");
  require(damping_increase > 1.0, "damping_increase must be > 1");
  require(damping_decrease > 1.0, "damping_decrease must be > 1");
}

int LmParams::function_eval_budget(std::size_t variables) const {
  return max_function_evals.value_or(100 * static_cast<int>(variables));
}

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::FunctionTolerance: return "function-tolerance";
    case TerminationReason::StepTolerance: return "step-tolerance";
    case TerminationReason::OptimalityTolerance: return "optimality-tolerance";
    case TerminationReason::MaxIterations: return "max-iterations";
    case TerminationReason::MaxFunctionEvals: return "max-function-evals";
  }
  return "unknown";
}

Eigen::VectorXd LaterationProblem::residuals(const Eigen::VectorXd& x) const {
  return toalift::residuals(kind_, EvalPoint::unpack(x, dim()), scenario_, measurement_);
}

Eigen::MatrixXd LaterationProblem::jacobian(const Eigen::VectorXd& x, bool& clamped) const {
  auto jac = toalift::jacobian(kind_, EvalPoint::unpack(x, dim()), scenario_, measurement_);
  clamped = clamped || jac.clamped;
  return std::move(jac.matrix);
}

LmRun minimize(const ResidualFunction& f, const Eigen::VectorXd& x0, const LmParams& params) {
  params.validate();
  require(static_cast<std::size_t>(x0.size()) == f.variable_count(),
          "initial estimate has the wrong number of variables");
  if (!x0.allFinite()) throw Error(ErrorCode::NonFiniteInput, "initial estimate is not finite");

  const int budget = params.function_eval_budget(f.variable_count());

  LmRun run;
  run.x = x0;
  Eigen::VectorXd r = f.residuals(run.x);
  run.function_evals = 1;
  run.cost = r.squaredNorm();
  Eigen::MatrixXd jac = f.jacobian(run.x, run.clamped);
  if (!std::isfinite(run.cost) || !jac.allFinite())
    throw Error(ErrorCode::NonFiniteInput, "cost or Jacobian is not finite at the initial estimate");
  run.trace.push_back(run.x);
  run.trace_costs.push_back(run.cost);

  double mu = params.initial_damping;
  for (;;) {
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() < params.optimality_tolerance) {
      run.reason = TerminationReason::OptimalityTolerance;
      return run;
    }
    if (run.iterations >= params.max_iterations) {
      run.reason = TerminationReason::MaxIterations;
      return run;
    }

    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd scaling = params.scaling == DampingScaling::Identity
                                        ? Eigen::VectorXd::Ones(normal.rows())
                                        : Eigen::VectorXd(normal.diagonal().cwiseMax(kMinDiagonal));

    for (;;) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal() += mu * scaling;
      const Eigen::VectorXd delta = damped.ldlt().solve(-grad);

      const double x_norm = run.x.norm();
      if (!delta.allFinite() || delta.norm() < params.step_tolerance * (1.0 + x_norm)) {
        run.reason = TerminationReason::StepTolerance;
        return run;
      }
      if (run.function_evals >= budget) {
        run.reason = TerminationReason::MaxFunctionEvals;
        return run;
      }

      Eigen::VectorXd candidate = run.x + delta;
      Eigen::VectorXd r_new = f.residuals(candidate);
      ++run.function_evals;
      const double cost_new = r_new.squaredNorm();

      if (std::isfinite(cost_new) && cost_new < run.cost) {
        const double previous = run.cost;
        run.x = std::move(candidate);
        r = std::move(r_new);
        run.cost = cost_new;
        jac = f.jacobian(run.x, run.clamped);
        mu /= params.damping_decrease;
        ++run.iterations;
        run.trace.push_back(run.x);
        run.trace_costs.push_back(run.cost);
        if (previous - cost_new < params.function_tolerance * previous) {
          run.reason = TerminationReason::FunctionTolerance;
          return run;
        }
        break;
      }
      mu *= params.damping_increase;
    }
  }
}

SolveResult lm_solve(const ObjectiveKind& kind, const Scenario& s, const MeasurementSet& m,
                     const EvalPoint& x0, const LmParams& params) {
  check_shapes(kind, x0, s, m);
  const LaterationProblem problem(kind, s, m);
  LmRun run = minimize(problem, x0.packed(), params);

  SolveResult out;
  out.final_point = EvalPoint::unpack(run.x, s.dim());
  out.final_cost = run.cost;
  out.reason = run.reason;
  out.iterations = run.iterations;
  out.function_evals = run.function_evals;
  out.clamp_flag = run.clamped;
  out.trace.reserve(run.trace.size());
  for (const auto& x : run.trace) out.trace.push_back(EvalPoint::unpack(x, s.dim()));
  out.trace_costs = std::move(run.trace_costs);
  out.stages.push_back({kind.name(), run.reason, run.iterations, run.function_evals});
  return out;
}

Eigen::MatrixXd finite_diff_jacobian(const ResidualFunction& f, const Eigen::VectorXd& x, double h) {
  require(h > 0.0, "finite-difference step must be > 0");
  const Eigen::Index n = x.size();
  Eigen::MatrixXd jac;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double step = h * std::max(1.0, std::abs(x[j]));
    Eigen::VectorXd hi = x;
    Eigen::VectorXd lo = x;
    hi[j] += step;
    lo[j] -= step;
    const Eigen::VectorXd col = (f.residuals(hi) - f.residuals(lo)) / (hi[j] - lo[j]);
    if (j == 0) jac.resize(col.size(), n);
    jac.col(j) = col;
  }
  return jac;
}

Eigen::MatrixXd finite_diff_jacobian(const ObjectiveKind& kind, const EvalPoint& p,
                                     const Scenario& s, const MeasurementSet& m, double h) {
  check_shapes(kind, p, s, m);
  return finite_diff_jacobian(LaterationProblem(kind, s, m), p.packed(), h);
}

}  // namespace toalift
