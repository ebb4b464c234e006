#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "model.hpp"
#include "test_support.hpp"

using namespace toalift;
using toalift::testing::pt;

TEST(Scenario, RejectsBadShapes) {
  EXPECT_THROW(Scenario(4, {pt(0, 0), pt(1, 0), pt(0, 1)}, pt(0, 0)), Error);
  EXPECT_THROW(Scenario(2, {pt(0, 0), pt(1, 0)}, pt(0, 0)), Error);
  EXPECT_THROW(Scenario(2, {pt(0, 0), pt(1, 0), pt(0, 1, 2)}, pt(0, 0)), Error);
  EXPECT_THROW(Scenario(2, {pt(0, 0), pt(1, 0), pt(0, 1)}, pt(0, 0, 0)), Error);
  EXPECT_THROW(Scenario(2, {pt(0, 0), pt(1, 0), pt(0, NAN)}, pt(0, 0)), Error);
  EXPECT_NO_THROW(Scenario(2, {pt(0, 0), pt(1, 0), pt(0, 1)}, pt(0, 0)));
}

TEST(MeasurementSet, Validates) {
  EXPECT_THROW(MeasurementSet({1.0, 2.0}, {1.0}, 0.0), Error);
  EXPECT_THROW(MeasurementSet({1.0}, {-1.0}, 0.0), Error);
  EXPECT_THROW(MeasurementSet({1.0}, {1.0}, -0.1), Error);
  EXPECT_THROW(MeasurementSet({INFINITY}, {1.0}, 0.1), Error);
  // Negative measured ranges are legal (no truncation).
  EXPECT_NO_THROW(MeasurementSet({-0.2}, {0.1}, 1.0));
  const auto m = MeasurementSet::exact({1.0, 2.0});
  EXPECT_EQ(m.sigma(), 0.0);
  EXPECT_TRUE(std::equal(m.ranges().begin(), m.ranges().end(), m.true_ranges().begin()));
}

TEST(EuclideanDistance, Examples) {
  EXPECT_DOUBLE_EQ(euclidean_distance(pt(1, 0), pt(0.5, 0)), 0.5);
  EXPECT_NEAR(euclidean_distance(pt(1, 0), pt(0, 2)), std::sqrt(5.0), 1e-15);
  EXPECT_EQ(euclidean_distance(pt(3, -7), pt(3, -7)), 0.0);
  EXPECT_EQ(euclidean_distance(pt(1, 2), pt(4, 6)), euclidean_distance(pt(4, 6), pt(1, 2)));
  EXPECT_THROW(euclidean_distance(pt(1, 2), pt(1, 2, 3)), Error);
}

TEST(TrueRanges, DemoConstellation) {
  const auto r = true_ranges(toalift::testing::demo());
  ASSERT_EQ(r.size(), 3u);
  EXPECT_DOUBLE_EQ(r[0], 0.5);
  EXPECT_NEAR(r[1], std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(r[2], std::sqrt(5.0), 1e-15);
}

TEST(TrueRanges, TruthOnStationAndTranslation) {
  const Scenario s(2, {pt(1, 2), pt(5, 0), pt(0, 4)}, pt(1, 2));
  EXPECT_EQ(true_ranges(s)[0], 0.0);

  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const Scenario a = generate_scenario(3, 5, 10.0, std::nullopt, rng);
    const Point shift = uniform_point(3, 100.0, rng);
    std::vector<Point> moved;
    for (const auto& b : a.stations()) moved.push_back(b + shift);
    const Scenario b(3, moved, a.truth() + shift);
    const auto ra = true_ranges(a);
    const auto rb = true_ranges(b);
    for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_NEAR(ra[i], rb[i], 1e-12);
  }
}

TEST(ApplyNoise, ZeroSigmaIsIdentity) {
  Rng rng(1);
  const std::vector<double> d{0.5, 2.0, 7.25};
  const auto m = apply_noise(d, 0.0, rng);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(m.ranges()[i], d[i]);
  EXPECT_EQ(m.sigma(), 0.0);
}

TEST(ApplyNoise, DeterministicForSeed) {
  const std::vector<double> d{1.0, 2.0, 3.0, 4.0};
  Rng a(42), b(42);
  const auto ma = apply_noise(d, 0.01, a);
  const auto mb = apply_noise(d, 0.01, b);
  EXPECT_TRUE(std::equal(ma.ranges().begin(), ma.ranges().end(), mb.ranges().begin()));
}

TEST(ApplyNoise, NegativeSigmaRejected) {
  Rng rng(1);
  const std::vector<double> d{1.0};
  EXPECT_THROW(apply_noise(d, -0.01, rng), Error);
}

TEST(ApplyNoise, SampleStdMatchesSigma) {
  Rng rng(2024);
  const std::vector<double> d(100000, 5.0);
  const auto m = apply_noise(d, 0.01, rng);
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double e = m.ranges()[i] - d[i];
    sum += e;
    sq += e * e;
  }
  const double n = static_cast<double>(d.size());
  const double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
  EXPECT_NEAR(sd, 0.01, 0.05 * 0.01);
}

TEST(ApplyNoise, NoTruncationAtZero) {
  Rng rng(5);
  const std::vector<double> d(1000, 0.01);
  const auto m = apply_noise(d, 1.0, rng);
  EXPECT_TRUE(std::any_of(m.ranges().begin(), m.ranges().end(), [](double r) { return r < 0.0; }));
}

TEST(GeometryFilter, SquareCornersPass) {
  const std::vector<Point> s{pt(0, 0), pt(10, 0), pt(0, 10), pt(10, 10)};
  const auto sv = normalized_singular_values(s);
  ASSERT_EQ(sv.size(), 2u);
  EXPECT_NEAR(sv[0], 1.0, 1e-12);
  EXPECT_NEAR(sv[1], 1.0, 1e-12);
  EXPECT_TRUE(geometry_ok(s, GeometryFilter{}));
}

TEST(GeometryFilter, DegenerateConstellationsFail) {
  const std::vector<Point> collinear{pt(0, 0), pt(5, 0), pt(10, 0)};
  const auto sv = normalized_singular_values(collinear);
  EXPECT_NEAR(sv[0], 1.0, 1e-12);
  EXPECT_NEAR(sv[1], 0.0, 1e-12);
  EXPECT_FALSE(geometry_ok(collinear, GeometryFilter{}));

  const std::vector<Point> two{pt(1, 1), pt(4, 5)};
  EXPECT_FALSE(geometry_ok(two, GeometryFilter{}));

  const std::vector<Point> same{pt(2, 2), pt(2, 2), pt(2, 2)};
  EXPECT_FALSE(geometry_ok(same, GeometryFilter{}));
}

TEST(GeometryFilter, ThresholdValidated) {
  const std::vector<Point> s{pt(0, 0), pt(10, 0), pt(0, 10)};
  EXPECT_THROW(geometry_ok(s, GeometryFilter{0.0}), Error);
  EXPECT_THROW(geometry_ok(s, GeometryFilter{1.0}), Error);
}

TEST(GeometryFilter, PopulationCovariance) {
  // Stations (0,0),(2,0),(0,1): population covariance [[8/9,-2/9],[-2/9,2/9]].
  const std::vector<Point> s{pt(0, 0), pt(2, 0), pt(0, 1)};
  Eigen::Matrix2d c;
  c << 8.0 / 9.0, -2.0 / 9.0, -2.0 / 9.0, 2.0 / 9.0;
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(c).eigenvalues();
  const auto sv = normalized_singular_values(s);
  EXPECT_NEAR(sv[1], ev[0] / ev[1], 1e-12);
}

TEST(GeometryFilter, TranslationAndPermutationInvariant) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    std::vector<Point> s;
    for (int i = 0; i < 4; ++i) s.push_back(uniform_point(2, 10.0, rng));
    const auto base = normalized_singular_values(s);
    std::vector<Point> moved;
    for (const auto& p : s) moved.push_back(p + pt(37.5, -12.25));
    std::vector<Point> perm(s.rbegin(), s.rend());
    const auto a = normalized_singular_values(moved);
    const auto b = normalized_singular_values(perm);
    for (std::size_t i = 0; i < base.size(); ++i) {
      EXPECT_NEAR(a[i], base[i], 1e-9);
      EXPECT_NEAR(b[i], base[i], 1e-12);
    }
    EXPECT_EQ(geometry_ok(s, GeometryFilter{}), geometry_ok(perm, GeometryFilter{}));
  }
}

TEST(GenerateScenario, PostconditionsHold) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const int dim = t % 2 ? 3 : 2;
    const Scenario s = generate_scenario(dim, 4, 10.0, GeometryFilter{}, rng);
    EXPECT_EQ(s.dim(), dim);
    EXPECT_EQ(s.station_count(), 4u);
    EXPECT_TRUE(geometry_ok(s.stations(), GeometryFilter{}));
    for (const auto& b : s.stations()) EXPECT_TRUE((b.array() >= 0.0).all() && (b.array() <= 10.0).all());
    EXPECT_TRUE((s.truth().array() >= 0.0).all() && (s.truth().array() <= 10.0).all());
  }
}

TEST(GenerateScenario, Deterministic) {
  Rng a(77), b(77);
  const Scenario sa = generate_scenario(2, 5, 10.0, GeometryFilter{}, a);
  const Scenario sb = generate_scenario(2, 5, 10.0, GeometryFilter{}, b);
  EXPECT_EQ(sa.truth(), sb.truth());
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(sa.station(i), sb.station(i));
}

TEST(GenerateScenario, StrictFilterHitsAttemptCap) {
  Rng rng(1);
  try {
    generate_scenario(2, 3, 10.0, GeometryFilter{0.999}, rng);
    FAIL() << "expected generation failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GenerationFailed);
  }
}

TEST(GenerateScenario, RejectsBadArguments) {
  Rng rng(1);
  EXPECT_THROW(generate_scenario(1, 3, 10.0, std::nullopt, rng), Error);
  EXPECT_THROW(generate_scenario(2, 2, 10.0, std::nullopt, rng), Error);
  EXPECT_THROW(generate_scenario(3, 3, 10.0, std::nullopt, rng), Error);
  EXPECT_THROW(generate_scenario(2, 4, 0.0, std::nullopt, rng), Error);
}
