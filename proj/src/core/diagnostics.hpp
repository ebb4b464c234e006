#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "model.hpp"
#include "objectives.hpp"

namespace toalift {

/// Three anchors at (0.5,0), (0,2), (0,-2) with the transponder at (1,0).
/// The plain range cost has its global minimum at (1,0) and a spurious
/// local minimum at (0,0).
Scenario demo_scenario();

/// Default initial estimate for the demo: position (2,-1), lambda 1.
Point demo_initial_position();
inline constexpr double kDemoInitialLambda = 1.0;

struct GradientCheckRow {
  ObjectiveKind kind;
  std::size_t points = 0;
  /// max over entries of |analytic - fd| / max(1, |analytic|)
  double max_relative_error = 0.0;
  /// Largest |fd entry| in a lambda column at lambda = 0 points.
  double max_lambda_column_at_zero = 0.0;
};

inline constexpr double kGradientCheckTolerance = 1e-6;
inline constexpr double kGradientCheckStep = 1e-6;

/// Compares analytic and central-difference Jacobians at random scenarios and
/// points for every objective kind. Every fifth lifted point has lambda = 0.
/// `corrupt` perturbs one analytic entry per point (negative control).
std::vector<GradientCheckRow> check_gradients(std::uint64_t seed, std::size_t points_per_kind,
                                              bool corrupt = false);

}  // namespace toalift
