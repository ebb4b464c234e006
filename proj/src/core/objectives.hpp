#pragma once

// Plain and dimension-lifted range objectives.
//
// Range form:    r_i = sqrt(|p - B_i|^2 + sum_j lambda_j^2) - d~_i
// Squared form:  r_i = |p - B_i|^2 + sum_j lambda_j^2 - d~_i^2
//
// The plain variants are the lifted ones with no lambda block. Costs are the
// sum of squared residuals.

#include <cstddef>
#include <span>
#include <string>

#include <Eigen/Core>

#include "model.hpp"

namespace toalift {

enum class ObjectiveForm { Range, Squared };

class ObjectiveKind {
 public:
  static ObjectiveKind plain_range() { return {ObjectiveForm::Range, 0}; }
  static ObjectiveKind lifted_range(int k);
  static ObjectiveKind plain_squared() { return {ObjectiveForm::Squared, 0}; }
  static ObjectiveKind lifted_squared(int k);

  ObjectiveForm form() const noexcept { return form_; }
  int lifts() const noexcept { return lifts_; }
  bool lifted() const noexcept { return lifts_ > 0; }
  std::size_t variable_count(int dim) const noexcept {
    return static_cast<std::size_t>(dim) + static_cast<std::size_t>(lifts_);
  }
  std::string name() const;

  friend bool operator==(const ObjectiveKind&, const ObjectiveKind&) = default;

 private:
  ObjectiveKind(ObjectiveForm form, int lifts) : form_(form), lifts_(lifts) {}
  ObjectiveForm form_;
  int lifts_;
};

/// Candidate position plus the lifting variables.
struct EvalPoint {
  Point position;
  Eigen::VectorXd lambdas;

  EvalPoint() = default;
  EvalPoint(Point pos, Eigen::VectorXd lam = {}) : position(std::move(pos)), lambdas(std::move(lam)) {}

  /// (position, lambdas) stacked into one variable vector.
  Eigen::VectorXd packed() const;
  static EvalPoint unpack(const Eigen::VectorXd& x, int dim);

  friend bool operator==(const EvalPoint& a, const EvalPoint& b) {
    return a.position.size() == b.position.size() && a.lambdas.size() == b.lambdas.size() &&
           a.position == b.position && a.lambdas == b.lambdas;
  }
};

/// Denominators below this are clamped in the range-form Jacobian and in the
/// curvature indicator.
inline constexpr double kDenominatorClamp = 1e-12;

struct JacobianEval {
  Eigen::MatrixXd matrix;
  bool clamped = false;
};

struct CurvatureIndicator {
  double value = 0.0;
  bool clamped = false;
};

/// Throws if the point's shape does not match kind and scenario.
void check_shapes(const ObjectiveKind& kind, const EvalPoint& p, const Scenario& s,
                  const MeasurementSet& m);

Eigen::VectorXd residuals(const ObjectiveKind& kind, const EvalPoint& p, const Scenario& s,
                          const MeasurementSet& m);

double cost(const ObjectiveKind& kind, const EvalPoint& p, const Scenario& s,
            const MeasurementSet& m);

JacobianEval jacobian(const ObjectiveKind& kind, const EvalPoint& p, const Scenario& s,
                      const MeasurementSet& m);

/// sum_i (|p - B_i| - d~_i) / |p - B_i|.
///
/// Half the second derivative of the lifted range cost along lambda at
/// lambda = 0. Negative means lambda is a descent direction, i.e. p is a
/// saddle of the lifted objective rather than a trap.
CurvatureIndicator curvature_indicator(const Point& p, const Scenario& s, const MeasurementSet& m);

double reduce_lambdas(std::span<const double> lambdas);
double reduce_lambdas(const Eigen::VectorXd& lambdas);

}  // namespace toalift
