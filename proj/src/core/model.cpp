#include "model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace toalift {

namespace {

bool all_finite(const Point& p) { return p.allFinite(); }

void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(ErrorCode::InvalidArgument, msg);
}

}  // namespace

Scenario::Scenario(int dim, std::vector<Point> stations, Point truth)
    : dim_(dim), stations_(std::move(stations)), truth_(std::move(truth)) {
  require(dim_ == 2 || dim_ == 3, "scenario dimension must be 2 or 3");
  require(stations_.size() >= 3, "scenario needs at least 3 stations");
  require(truth_.size() == dim_, "truth dimension does not match scenario dimension");
  require(all_finite(truth_), "truth has non-finite coordinates");
  for (const auto& st : stations_) {
    require(st.size() == dim_, "station dimension does not match scenario dimension");
    require(all_finite(st), "station has non-finite coordinates");
  }
}

MeasurementSet::MeasurementSet(std::vector<double> ranges, std::vector<double> true_ranges,
                               double sigma)
    : ranges_(std::move(ranges)), true_ranges_(std::move(true_ranges)), sigma_(sigma) {
  require(ranges_.size() == true_ranges_.size(), "ranges and true_ranges differ in length");
  require(std::isfinite(sigma_) && sigma_ >= 0.0, "sigma must be finite and >= 0");
  for (double r : true_ranges_) require(std::isfinite(r) && r >= 0.0, "true ranges must be >= 0");
  for (double r : ranges_) require(std::isfinite(r), "ranges must be finite");
}

MeasurementSet MeasurementSet::exact(std::vector<double> true_ranges) {
  auto copy = true_ranges;
  return MeasurementSet(std::move(copy), std::move(true_ranges), 0.0);
}

void GeometryFilter::validate() const {
  require(min_normalized_singular_value > 0.0 && min_normalized_singular_value < 1.0,
          "geometry filter threshold must lie strictly between 0 and 1");
}

double euclidean_distance(const Point& p, const Point& q) {
  require(p.size() == q.size(), "euclidean_distance: dimension mismatch");
  return (p - q).norm();
}

std::vector<double> true_ranges(const Scenario& s) {
  std::vector<double> out;
  out.reserve(s.station_count());
  for (const auto& st : s.stations()) out.push_back(euclidean_distance(s.truth(), st));
  return out;
}

MeasurementSet apply_noise(std::span<const double> true_ranges, double sigma, Rng& rng) {
  require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be finite and >= 0");
  std::vector<double> exact(true_ranges.begin(), true_ranges.end());
  if (sigma == 0.0) return MeasurementSet::exact(std::move(exact));

  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> noisy;
  noisy.reserve(exact.size());
  for (double d : exact) noisy.push_back(d + noise(rng));
  return MeasurementSet(std::move(noisy), std::move(exact), sigma);
}

std::vector<double> normalized_singular_values(std::span<const Point> stations) {
  require(stations.size() >= 2, "geometry check needs at least 2 stations");
  const auto dim = stations.front().size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& st : stations) {
    require(st.size() == dim, "stations must share a dimension");
    mean += st;
  }
  const double n = static_cast<double>(stations.size());
  mean /= n;

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& st : stations) {
    const Eigen::VectorXd c = st - mean;
    cov += c * c.transpose();
  }
  cov /= n;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cov);
  const Eigen::VectorXd sv = svd.singularValues();
  std::vector<double> out(sv.data(), sv.data() + sv.size());
  const double largest = out.empty() ? 0.0 : out.front();
  for (double& v : out) v = largest > 0.0 ? v / largest : 0.0;
  return out;
}

bool geometry_ok(std::span<const Point> stations, const GeometryFilter& filter) {
  filter.validate();
  const auto values = normalized_singular_values(stations);
  return std::all_of(values.begin(), values.end(),
                     [&](double v) { return v > filter.min_normalized_singular_value; });
}

Point uniform_point(int dim, double cube_side, Rng& rng) {
  std::uniform_real_distribution<double> coord(0.0, cube_side);
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = coord(rng);
  return p;
}

Scenario generate_scenario(int dim, std::size_t n_stations, double cube_side,
                           const std::optional<GeometryFilter>& filter, Rng& rng,
                           std::size_t max_attempts) {
  require(dim == 2 || dim == 3, "dimension must be 2 or 3");
  require(n_stations >= static_cast<std::size_t>(dim) + 1, "need at least dim+1 stations");
  require(std::isfinite(cube_side) && cube_side > 0.0, "cube side must be > 0");
  require(max_attempts >= 1, "attempt cap must be >= 1");
  if (filter) filter->validate();

  Point truth = uniform_point(dim, cube_side, rng);
  std::vector<Point> stations(n_stations);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    for (auto& st : stations) st = uniform_point(dim, cube_side, rng);
    if (!filter || geometry_ok(stations, *filter)) {
      return Scenario(dim, std::move(stations), std::move(truth));
    }
  }
  throw Error(ErrorCode::GenerationFailed,
              "no station set passed the geometry filter after " +
                  std::to_string(max_attempts) + " attempts");
}

}  // namespace toalift
