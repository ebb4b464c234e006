#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "lm_solver.hpp"

namespace toalift {

namespace {

Point point2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

// Random point kept at least `min_gap` away from every station.
Point generic_point(const Scenario& s, Rng& rng, double min_gap) {
  for (;;) {
    Point p = uniform_point(s.dim(), 10.0, rng);
    const bool clear = std::all_of(s.stations().begin(), s.stations().end(),
                                   [&](const Point& st) { return (p - st).norm() > min_gap; });
    if (clear) return p;
  }
}

}  // namespace

Scenario demo_scenario() {
  return Scenario(2, {point2(0.5, 0.0), point2(0.0, 2.0), point2(0.0, -2.0)}, point2(1.0, 0.0));
}

Point demo_initial_position() { return point2(2.0, -1.0); }

std::vector<GradientCheckRow> check_gradients(std::uint64_t seed, std::size_t points_per_kind,
                                              bool corrupt) {
  const std::vector<ObjectiveKind> kinds = {
      ObjectiveKind::plain_range(),    ObjectiveKind::lifted_range(1),  ObjectiveKind::lifted_range(2),
      ObjectiveKind::lifted_range(3),  ObjectiveKind::plain_squared(), ObjectiveKind::lifted_squared(1),
      ObjectiveKind::lifted_squared(2),
  };
  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::uniform_real_distribution<double> lambda(-3.0, 3.0);

  std::vector<GradientCheckRow> rows;
  for (const auto& kind : kinds) {
    GradientCheckRow row{kind};
    for (std::size_t i = 0; i < points_per_kind; ++i) {
      const int dim = (i % 2 == 0) ? 2 : 3;
      const Scenario s = generate_scenario(dim, static_cast<std::size_t>(dim) + 2, 10.0, std::nullopt, rng);
      const auto exact = true_ranges(s);
      std::vector<double> noisy(exact);
      for (double& d : noisy) d += noise(rng);
      const MeasurementSet m(std::move(noisy), exact, 0.1);

      const bool lambda_zero = kind.lifted() && i % 5 == 0;
      Eigen::VectorXd lambdas(kind.lifts());
      for (Eigen::Index j = 0; j < lambdas.size(); ++j) lambdas[j] = lambda_zero ? 0.0 : lambda(rng);
      const EvalPoint p(generic_point(s, rng, 0.5), lambdas);

      Eigen::MatrixXd analytic = jacobian(kind, p, s, m).matrix;
      if (corrupt) analytic(0, 0) += 1e-3;
      const Eigen::MatrixXd fd = finite_diff_jacobian(kind, p, s, m, kGradientCheckStep);

      for (Eigen::Index r = 0; r < analytic.rows(); ++r) {
        for (Eigen::Index c = 0; c < analytic.cols(); ++c) {
          const double err = std::abs(analytic(r, c) - fd(r, c)) / std::max(1.0, std::abs(analytic(r, c)));
          row.max_relative_error = std::max(row.max_relative_error, err);
          if (lambda_zero && c >= s.dim())
            row.max_lambda_column_at_zero = std::max(row.max_lambda_column_at_zero, std::abs(fd(r, c)));
        }
      }
      ++row.points;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace toalift
