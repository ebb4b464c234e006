#include "strategies.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace toalift {

namespace {

[[noreturn]] void bad_strategy(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::InvalidArgument,
              "invalid strategy '" + std::string(text) + "': " + why);
}

double parse_number(std::string_view text, std::string_view value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_strategy(text, "bad number '" + std::string(value) + "'");
  return out;
}

}  // namespace

void Strategy::validate() const {
  if (kind == StrategyKind::Plain) return;
  if (lifts < 1) throw Error(ErrorCode::InvalidArgument, "lifted strategy needs k >= 1");
  if (!std::isfinite(lambda0) || lambda0 == 0.0)
    throw Error(ErrorCode::InvalidArgument,
                "lifted strategy needs a finite nonzero lambda0; lambda would stay at zero");
}

std::string Strategy::to_string() const {
  if (kind == StrategyKind::Plain) return "plain";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, lambda0);
  return std::string(kind == StrategyKind::Lifted ? "lifted" : "restart") + ":k=" + std::to_string(lifts) +
         ",lambda0=" + (ec == std::errc() ? std::string(buf, end) : std::string("nan"));
}

Strategy Strategy::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  Strategy out;
  if (head == "plain") {
    if (colon != std::string_view::npos) bad_strategy(text, "plain takes no parameters");
    return plain();
  }
  if (head == "lifted")
    out = lifted();
  else if (head == "restart")
    out = restart();
  else
    bad_strategy(text, "expected plain, lifted or restart");

  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) bad_strategy(text, "expected key=value");
      const std::string_view key = item.substr(0, eq);
      const double value = parse_number(text, item.substr(eq + 1));
      if (key == "k") {
        if (value != std::floor(value)) bad_strategy(text, "k must be an integer");
        out.lifts = static_cast<int>(value);
      } else if (key == "lambda0") {
        out.lambda0 = value;
      } else {
        bad_strategy(text, "unknown key '" + std::string(key) + "'");
      }
    }
  }
  out.validate();
  return out;
}

SolveResult solve_with_strategy(const Strategy& strategy, const Scenario& s, const MeasurementSet& m,
                                const Point& x0_position, const LmParams& params) {
  strategy.validate();
  if (x0_position.size() != s.dim())
    throw Error(ErrorCode::InvalidArgument, "initial position dimension does not match scenario");

  if (strategy.kind == StrategyKind::Plain)
    return lm_solve(ObjectiveKind::plain_range(), s, m, EvalPoint(x0_position), params);

  const EvalPoint lifted_start(x0_position, Eigen::VectorXd::Constant(strategy.lifts, strategy.lambda0));
  SolveResult lifted = lm_solve(ObjectiveKind::lifted_range(strategy.lifts), s, m, lifted_start, params);
  if (strategy.kind == StrategyKind::Lifted) return lifted;

  // Drop the lifting variables and refine the plain objective from there.
  SolveResult refined = lm_solve(ObjectiveKind::plain_range(), s, m,
                                 EvalPoint(lifted.final_point.position), params);

  SolveResult out;
  out.final_point = refined.final_point;
  out.final_cost = refined.final_cost;
  out.reason = refined.reason;
  out.iterations = lifted.iterations + refined.iterations;
  out.function_evals = lifted.function_evals + refined.function_evals;
  out.clamp_flag = lifted.clamp_flag || refined.clamp_flag;
  out.trace = std::move(lifted.trace);
  out.trace.insert(out.trace.end(), refined.trace.begin(), refined.trace.end());
  out.trace_costs = std::move(lifted.trace_costs);
  out.trace_costs.insert(out.trace_costs.end(), refined.trace_costs.begin(), refined.trace_costs.end());
  out.stages = {lifted.stages.front(), refined.stages.front()};
  return out;
}

}  // namespace toalift
