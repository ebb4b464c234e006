#include "objectives.hpp"

#include <cmath>

namespace toalift {

ObjectiveKind ObjectiveKind::lifted_range(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "lifted objective needs k >= 1");
  return {ObjectiveForm::Range, k};
}

ObjectiveKind ObjectiveKind::lifted_squared(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "lifted objective needs k >= 1");
  return {ObjectiveForm::Squared, k};
}

std::string ObjectiveKind::name() const {
  const char* base = form_ == ObjectiveForm::Range ? "range" : "squared";
  if (!lifted()) return std::string("plain-") + base;
  return std::string("lifted-") + base + "(k=" + std::to_string(lifts_) + ")";
}

Eigen::VectorXd EvalPoint::packed() const {
  Eigen::VectorXd x(position.size() + lambdas.size());
  x << position, lambdas;
  return x;
}

EvalPoint EvalPoint::unpack(const Eigen::VectorXd& x, int dim) {
  return EvalPoint(x.head(dim), x.tail(x.size() - dim));
}

void check_shapes(const ObjectiveKind& kind, const EvalPoint& p, const Scenario& s,
                  const MeasurementSet& m) {
  if (p.position.size() != s.dim())
    throw Error(ErrorCode::InvalidArgument, "evaluation point dimension does not match scenario");
  if (p.lambdas.size() != kind.lifts())
    throw Error(ErrorCode::InvalidArgument,
                "evaluation point has " + std::to_string(p.lambdas.size()) +
                    " lifting variables, objective expects " + std::to_string(kind.lifts()));
  if (m.size() != s.station_count())
    throw Error(ErrorCode::InvalidArgument, "measurement count does not match station count");
}

Eigen::VectorXd residuals(const ObjectiveKind& kind, const EvalPoint& p, const Scenario& s,
                          const MeasurementSet& m) {
  check_shapes(kind, p, s, m);
  const double lift = p.lambdas.squaredNorm();
  const auto ranges = m.ranges();
  Eigen::VectorXd r(s.station_count());
  for (std::size_t i = 0; i < s.station_count(); ++i) {
    const double sq = (p.position - s.station(i)).squaredNorm() + lift;
    const Eigen::Index row = static_cast<Eigen::Index>(i);
    if (kind.form() == ObjectiveForm::Range)
      r[row] = std::sqrt(sq) - ranges[i];
    else
      r[row] = sq - ranges[i] * ranges[i];
  }
  return r;
}

double cost(const ObjectiveKind& kind, const EvalPoint& p, const Scenario& s,
            const MeasurementSet& m) {
  return residuals(kind, p, s, m).squaredNorm();
}

JacobianEval jacobian(const ObjectiveKind& kind, const EvalPoint& p, const Scenario& s,
                      const MeasurementSet& m) {
  check_shapes(kind, p, s, m);
  const int dim = s.dim();
  const auto n = static_cast<Eigen::Index>(s.station_count());
  JacobianEval out{Eigen::MatrixXd(n, dim + kind.lifts()), false};
  const double lift = p.lambdas.squaredNorm();

  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd diff = p.position - s.station(static_cast<std::size_t>(i));
    double scale;
    if (kind.form() == ObjectiveForm::Range) {
      double rho = std::sqrt(diff.squaredNorm() + lift);
      if (rho < kDenominatorClamp) {
        rho = kDenominatorClamp;
        out.clamped = true;
      }
      scale = 1.0 / rho;
    } else {
      scale = 2.0;
    }
    out.matrix.row(i).head(dim) = scale * diff.transpose();
    out.matrix.row(i).tail(kind.lifts()) = scale * p.lambdas.transpose();
  }
  return out;
}

CurvatureIndicator curvature_indicator(const Point& p, const Scenario& s, const MeasurementSet& m) {
  if (p.size() != s.dim())
    throw Error(ErrorCode::InvalidArgument, "evaluation point dimension does not match scenario");
  if (m.size() != s.station_count())
    throw Error(ErrorCode::InvalidArgument, "measurement count does not match station count");
  CurvatureIndicator out;
  const auto ranges = m.ranges();
  for (std::size_t i = 0; i < s.station_count(); ++i) {
    const double dist = (p - s.station(i)).norm();
    double denom = dist;
    if (denom < kDenominatorClamp) {
      denom = kDenominatorClamp;
      out.clamped = true;
    }
    out.value += (dist - ranges[i]) / denom;
  }
  return out;
}

double reduce_lambdas(std::span<const double> lambdas) {
  double sum = 0.0;
  for (double l : lambdas) sum += l * l;
  return std::sqrt(sum);
}

double reduce_lambdas(const Eigen::VectorXd& lambdas) {
  return reduce_lambdas(std::span<const double>(lambdas.data(), static_cast<std::size_t>(lambdas.size())));
}

}  // namespace toalift
