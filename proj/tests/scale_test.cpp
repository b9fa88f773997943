// Copyright 2026 The foodvol Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "foodvol/fixtures.hpp"
#include "foodvol/scale.hpp"
#include "foodvol/volume.hpp"
#include "test_util.hpp"

namespace {

using namespace foodvol;
using foodvol::testing::relative_error;

// Oracle: full sort, pick the middle (average the two middles when even).
double sorted_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RigidTransform random_pose(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {axis_angle(Vec3(u(gen), u(gen), u(gen)), std::numbers::pi * u(gen)),
          Vec3(10 * u(gen), 10 * u(gen), 10 * u(gen))};
}

TEST(AdjacentCornerDistances, TwoByTwoUnitGrid) {
  CornerGrid g;
  g.rows = g.cols = 2;
  g.square_size_real = 1.0;
  g.corners = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  EXPECT_EQ(adjacent_corner_distances(g), (std::vector<double>{1, 1, 1, 1}));
}

TEST(AdjacentCornerDistances, ThreeByThreeCount) {
  const auto g = make_corner_grid(3, 3, 0.05, 0.012);
  const auto d = adjacent_corner_distances(g);
  ASSERT_EQ(d.size(), 12u);
  for (double x : d) EXPECT_NEAR(x, 0.05, 1e-15);
}

TEST(AdjacentCornerDistances, OrderIsRowsThenColumns) {
  CornerGrid g;
  g.rows = 2;
  g.cols = 3;
  g.square_size_real = 1.0;
  // Horizontal gaps 1, 2 in row 0 and 3, 4 in row 1; vertical gaps 5, 6, 7.
  g.corners = {{0, 0, 0}, {1, 0, 0}, {3, 0, 0}, {0, 5, 0}, {3, 6, 0}, {7, 7, 0}};
  const auto d = adjacent_corner_distances(g);
  ASSERT_EQ(d.size(), 7u);
  EXPECT_DOUBLE_EQ(d[0], 1.0);
  EXPECT_DOUBLE_EQ(d[1], 2.0);
  EXPECT_DOUBLE_EQ(d[4], 5.0);
  EXPECT_DOUBLE_EQ(d[2], (g.corners[4] - g.corners[3]).norm());
  EXPECT_DOUBLE_EQ(d[6], (g.corners[5] - g.corners[2]).norm());
}

TEST(AdjacentCornerDistances, NoisySevenByTen) {
  const double sigma = 1e-3, spacing = 0.05;
  const auto g = make_corner_grid(7, 10, spacing, 0.012, {}, sigma, 42);
  const auto d = adjacent_corner_distances(g);
  ASSERT_EQ(d.size(), 7u * 9u + 10u * 6u);
  EXPECT_LE(std::abs(sorted_median(d) - spacing), 3 * sigma);
}

TEST(AdjacentCornerDistances, CoincidentCornersAreDegenerate) {
  auto g = make_corner_grid(3, 3, 1.0, 1.0);
  g.corners[1] = g.corners[0];
  try {
    adjacent_corner_distances(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateGrid);
  }
}

TEST(CornerGrid, InvalidGridsRejected) {
  auto g = make_corner_grid(3, 3, 1.0, 1.0);
  g.corners.pop_back();
  EXPECT_THROW(estimate_scale(g), Error);
  g = make_corner_grid(3, 3, 1.0, 1.0);
  g.square_size_real = 0.0;
  EXPECT_THROW(estimate_scale(g), Error);
  g = make_corner_grid(3, 3, 1.0, 1.0);
  g.rows = 1;
  g.cols = 9;
  EXPECT_THROW(estimate_scale(g), Error);
}

TEST(Median, MatchesSortOracle) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int n = 1; n < 40; ++n) {
    std::vector<double> v(n);
    for (auto& x : v) x = u(gen);
    EXPECT_EQ(median(v), sorted_median(v)) << n;
  }
  EXPECT_EQ(median(std::vector<double>{1, 2, 3, 4}), 2.5);
}

TEST(EstimateScale, UniformGrid) {
  const auto est = estimate_scale(make_corner_grid(5, 6, 0.05, 0.012));
  EXPECT_NEAR(est.s, 0.24, 1e-12);
  EXPECT_EQ(est.distance_count, 49u);
  EXPECT_EQ(est.s, 0.012 / est.median_distance);
}

TEST(EstimateScale, RealisticTargetScale) {
  const double s = 0.0936, l_real = 0.025;
  const auto est = estimate_scale(make_corner_grid(7, 10, l_real / s, l_real));
  EXPECT_LE(relative_error(est.s, s), 1e-12);
}

TEST(EstimateScale, OneDisplacedCornerBarelyMoves) {
  const auto clean = make_corner_grid(7, 10, 0.05, 0.012);
  auto corrupted = clean;
  // Push one interior corner 10 spacings away: up to four distances change.
  corrupted.corners[3 * 10 + 4] += Vec3(0.5, 0.0, 0.0);
  EXPECT_LE(relative_error(estimate_scale(corrupted).s, estimate_scale(clean).s), 0.01);
}

TEST(EstimateScale, RigidPoseInvarianceProperty) {
  std::mt19937_64 gen(11);
  const double ref = estimate_scale(make_corner_grid(6, 9, 0.3, 0.02)).s;
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = make_corner_grid(6, 9, 0.3, 0.02, random_pose(gen));
    EXPECT_LE(relative_error(estimate_scale(g).s, ref), 1e-12);
  }
}

TEST(EstimateScale, UniformScalingDividesS) {
  const auto g = make_corner_grid(4, 5, 0.07, 0.015, {}, 1e-3, 8);
  const double s = estimate_scale(g).s;
  for (double k : {0.5, 3.0, 17.25}) {
    auto scaled = g;
    for (auto& c : scaled.corners) c *= k;
    EXPECT_LE(relative_error(estimate_scale(scaled).s, s / k), 1e-12);
  }
}

TEST(EstimateScale, MedianRobustToMinorityCorruption) {
  const auto g = make_corner_grid(7, 10, 0.05, 0.012, {}, 5e-4, 21);
  const auto clean = adjacent_corner_distances(g);
  const auto [lo, hi] = std::minmax_element(clean.begin(), clean.end());
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = clean;
    std::vector<std::size_t> idx(d.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), gen);
    const std::size_t k = (d.size() - 1) / 2;
    for (std::size_t i = 0; i < k; ++i) d[idx[i]] = *hi * (2.0 + static_cast<double>(gen() % 1000));
    const auto est = scale_from_distances(d, 0.012);
    EXPECT_GE(est.median_distance, *lo);
    EXPECT_LE(est.median_distance, *hi);
  }
}

TEST(EstimateScale, RecoversMetricVolume) {
  // A 4 cm x 3 cm x 2 cm box reconstructed at 0.1 m per model unit.
  const double true_s = 0.1;
  const auto model = apply_scale(make_box(0.04, 0.03, 0.02), 1.0 / true_s);
  const auto est = estimate_scale(make_corner_grid(7, 10, 0.012 / true_s, 0.012));
  const double v = volume_divergence(apply_scale(model, est.s)).volume;
  EXPECT_LE(relative_error(v, 0.04 * 0.03 * 0.02), 1e-12);
}

TEST(CornerGridJson, RoundTripAndErrors) {
  const auto g = make_corner_grid(3, 4, 0.2, 0.01, {}, 1e-3, 5);
  const auto back = corner_grid_from_json(to_json(g));
  EXPECT_EQ(back.corners, g.corners);
  EXPECT_EQ(back.rows, 3u);
  EXPECT_EQ(back.square_size_real, 0.01);

  auto j = to_json(g);
  j.erase("square_size_real_m");
  EXPECT_THROW(corner_grid_from_json(j), Error);
  j = to_json(g);
  j["rows"] = 5;
  try {
    corner_grid_from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidGrid);
  }
}

}  // namespace
