#pragma once

// Plain, lifted and lifted-then-plain ("restart") solve strategies.

#include <string>
#include <string_view>

#include "lm_solver.hpp"
#include "model.hpp"

namespace toalift {

enum class StrategyKind { Plain, Lifted, LiftedRestart };

struct Strategy {
  StrategyKind kind = StrategyKind::Plain;
  int lifts = 1;
  double lambda0 = 1.0;

  static Strategy plain() { return {StrategyKind::Plain, 0, 0.0}; }
  static Strategy lifted(int k = 1, double lambda0 = 1.0) { return {StrategyKind::Lifted, k, lambda0}; }
  static Strategy restart(int k = 1, double lambda0 = 1.0) {
    return {StrategyKind::LiftedRestart, k, lambda0};
  }

  void validate() const;

  /// "plain", "lifted:k=1,lambda0=1", "restart:k=2,lambda0=0.5"
  std::string to_string() const;
  /// Accepts the to_string() form; omitted parameters take their defaults.
  static Strategy parse(std::string_view text);

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// The reported final_point always carries the D-dimensional position;
/// lifted solves keep their lambda block in final_point.lambdas.
SolveResult solve_with_strategy(const Strategy& strategy, const Scenario& s, const MeasurementSet& m,
                                const Point& x0_position, const LmParams& params);

}  // namespace toalift
