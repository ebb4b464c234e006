#pragma once

// Constellation and measurement types, scenario generation and the
// anchor-geometry filter.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace toalift {

enum class ErrorCode {
  InvalidArgument,
  GenerationFailed,
  NonFiniteInput,
  Io,
  Parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

using Point = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Known anchor positions plus the ground-truth transponder position.
class Scenario {
 public:
  Scenario(int dim, std::vector<Point> stations, Point truth);

  int dim() const noexcept { return dim_; }
  std::size_t station_count() const noexcept { return stations_.size(); }
  std::span<const Point> stations() const noexcept { return stations_; }
  const Point& station(std::size_t i) const { return stations_.at(i); }
  const Point& truth() const noexcept { return truth_; }

 private:
  int dim_;
  std::vector<Point> stations_;
  Point truth_;
};

/// Measured ranges d~_i = d_i + e_i together with the noise-free ranges.
class MeasurementSet {
 public:
  MeasurementSet(std::vector<double> ranges, std::vector<double> true_ranges, double sigma);

  /// Noise-free measurement: ranges equal true_ranges.
  static MeasurementSet exact(std::vector<double> true_ranges);

  std::span<const double> ranges() const noexcept { return ranges_; }
  std::span<const double> true_ranges() const noexcept { return true_ranges_; }
  double sigma() const noexcept { return sigma_; }
  std::size_t size() const noexcept { return ranges_.size(); }

 private:
  std::vector<double> ranges_;
  std::vector<double> true_ranges_;
  double sigma_;
};

struct GeometryFilter {
  double min_normalized_singular_value = 0.1;

  void validate() const;
};

inline constexpr std::size_t kDefaultGenerationAttempts = 10000;

double euclidean_distance(const Point& p, const Point& q);

std::vector<double> true_ranges(const Scenario& s);

MeasurementSet apply_noise(std::span<const double> true_ranges, double sigma, Rng& rng);

/// Singular values of the population covariance of the station coordinates,
/// descending, each divided by the largest. All zeros when the covariance
/// vanishes.
std::vector<double> normalized_singular_values(std::span<const Point> stations);

bool geometry_ok(std::span<const Point> stations, const GeometryFilter& filter);

/// Samples the truth, then re-draws station sets (uniform in [0, side]^dim)
/// until the filter accepts one or `max_attempts` draws have been rejected.
Scenario generate_scenario(int dim, std::size_t n_stations, double cube_side,
                           const std::optional<GeometryFilter>& filter, Rng& rng,
                           std::size_t max_attempts = kDefaultGenerationAttempts);

Point uniform_point(int dim, double cube_side, Rng& rng);

}  // namespace toalift
