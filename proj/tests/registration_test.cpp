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


#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "foodvol/fixtures.hpp"
#include "foodvol/metrics.hpp"
#include "foodvol/registration.hpp"
#include "test_util.hpp"

namespace {

using namespace foodvol;
using foodvol::testing::ellipsoid_cloud;

constexpr double kDeg = std::numbers::pi / 180.0;

double max_abs_diff(const RigidTransform& a, const RigidTransform& b) {
  return std::max((a.rotation - b.rotation).cwiseAbs().maxCoeff(),
                  (a.translation - b.translation).cwiseAbs().maxCoeff());
}

void expect_proper_rotation(const Mat3& r) {
  EXPECT_NEAR(r.determinant(), 1.0, 1e-9);
  EXPECT_LE(orthonormality_error(r), 1e-9);
}

TEST(BestRigidFit, IdentityOnSameCloud) {
  const auto pts = foodvol::testing::random_points(50, 1);
  const auto t = best_rigid_fit(pts, pts);
  EXPECT_LE(max_abs_diff(t, RigidTransform::identity()), 1e-12);
}

TEST(BestRigidFit, RecoversKnownTransform) {
  const RigidTransform truth{axis_angle(Vec3::UnitZ(), 30 * kDeg), Vec3(1, 2, 3)};
  const auto src = foodvol::testing::random_points(200, 2);
  const auto t = best_rigid_fit(src, truth.apply(src));
  EXPECT_LE(max_abs_diff(t, truth), 1e-9);
  expect_proper_rotation(t.rotation);
}

TEST(BestRigidFit, RandomTransformsProperty) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const RigidTransform truth{axis_angle(Vec3(u(gen), u(gen), u(gen)), std::numbers::pi * u(gen)),
                               Vec3(9 * u(gen), 9 * u(gen), 9 * u(gen))};
    const auto src = foodvol::testing::random_points(3 + gen() % 50, gen());
    const auto t = best_rigid_fit(src, truth.apply(src));
    EXPECT_LE(max_abs_diff(t, truth), 1e-9) << trial;
    expect_proper_rotation(t.rotation);
  }
}

TEST(BestRigidFit, MirrorImageStillProper) {
  auto src = foodvol::testing::random_points(40, 3);
  std::vector<Vec3> mirrored;
  for (const auto& p : src) mirrored.emplace_back(-p.x(), p.y(), p.z());
  const auto t = best_rigid_fit(src, mirrored);
  expect_proper_rotation(t.rotation);
}

TEST(BestRigidFit, InputErrors) {
  const auto pts = foodvol::testing::random_points(5, 4);
  const std::vector<Vec3> two(pts.begin(), pts.begin() + 2);
  try {
    best_rigid_fit(two, two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInsufficientPoints);
  }
  const std::vector<Vec3> line = {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {5, 5, 5}};
  try {
    best_rigid_fit(line, line);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateConfiguration);
  }
  EXPECT_THROW(best_rigid_fit(pts, two), Error);
}

TEST(Icp, IdenticalCloudsConvergeImmediately) {
  const auto cloud = ellipsoid_cloud(3000, 5);
  const auto r = icp(cloud, cloud);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations_used, 2);
  EXPECT_LE(max_abs_diff(r.transform, RigidTransform::identity()), 1e-9);
  EXPECT_LE(r.final_rmse, 1e-12);
}

TEST(Icp, RecoversSmallPerturbation) {
  const auto src = ellipsoid_cloud(3000, 6);
  const RigidTransform truth{axis_angle(Vec3(1, 1, 0), 5 * kDeg), Vec3(0.01, 0, 0)};
  const auto r = icp(src, truth.apply(src));
  EXPECT_LE(max_abs_diff(r.transform, truth), 1e-6);
  EXPECT_LE(r.final_rmse, 1e-9);
}

TEST(Icp, RecoversThirtyDegreesOnAnisotropicShape) {
  const auto src = ellipsoid_cloud(10000, 7);
  const RigidTransform truth{axis_angle(Vec3::UnitZ(), 30 * kDeg), Vec3(1, 2, 3)};
  const auto r = icp(src, truth.apply(src));
  EXPECT_LE(max_abs_diff(r.transform, truth), 1e-4);
  expect_proper_rotation(r.transform.rotation);
}

// A sphere maps onto itself under every rotation, so nearest-neighbour
// registration cannot see the rotation. Pin that behaviour: the surfaces
// coincide (tiny residual) while the recovered rotation need not match.
TEST(Icp, SphereRotationIsUnobservable) {
  const auto src = sample_surface(make_icosphere(1.0, 4), 4000, 8).points;
  const RigidTransform truth{axis_angle(Vec3::UnitZ(), 30 * kDeg), Vec3(1, 2, 3)};
  const auto r = icp(src, truth.apply(src));
  EXPECT_LE((r.transform.translation - truth.translation).norm(), 0.05);
  EXPECT_LE(r.final_rmse, 0.05);
  expect_proper_rotation(r.transform.rotation);
}

TEST(Icp, RmseHistoryNonIncreasing) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto src = ellipsoid_cloud(1500, gen());
    const auto tgt = ellipsoid_cloud(1500, gen());
    const RigidTransform pose{axis_angle(Vec3(u(gen), u(gen), u(gen)), 0.8 * u(gen)),
                              Vec3(u(gen), u(gen), u(gen))};
    const auto r = icp(src, pose.apply(tgt));
    ASSERT_EQ(r.rmse_history.size(), static_cast<std::size_t>(r.iterations_used) + 1);
    for (std::size_t i = 1; i < r.rmse_history.size(); ++i) {
      EXPECT_LE(r.rmse_history[i], r.rmse_history[i - 1]) << trial << " step " << i;
    }
    EXPECT_EQ(r.final_rmse, r.rmse_history.back());
    expect_proper_rotation(r.transform.rotation);
  }
}

TEST(Icp, TranslationEquivariance) {
  const auto src = ellipsoid_cloud(2000, 10);
  const RigidTransform pose{axis_angle(Vec3(0, 1, 1), 10 * kDeg), Vec3(0.2, 0, 0)};
  const auto tgt = pose.apply(ellipsoid_cloud(2000, 11));
  const Vec3 shift(4, -7, 2);
  std::vector<Vec3> shifted;
  for (const auto& p : tgt) shifted.push_back(p + shift);
  const auto a = icp(src, tgt);
  const auto b = icp(src, shifted);
  EXPECT_EQ(a.iterations_used, b.iterations_used);
  EXPECT_LE((a.transform.rotation - b.transform.rotation).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE((a.transform.translation + shift - b.transform.translation).cwiseAbs().maxCoeff(),
            1e-9);
}

TEST(Icp, UnrelatedShapesStillProduceProperRotation) {
  const auto box = sample_surface(make_box(1, 2, 0.5), 2000, 12).points;
  const auto torus = sample_surface(make_torus(1, 0.3, 32, 16), 2000, 13).points;
  const auto r = icp(box, torus);
  expect_proper_rotation(r.transform.rotation);
  EXPECT_TRUE(std::isfinite(r.final_rmse));
}

TEST(Icp, CorrespondenceCutoffAndSubsampling) {
  const auto src = ellipsoid_cloud(4000, 14);
  const RigidTransform truth{axis_angle(Vec3::UnitX(), 4 * kDeg), Vec3(0, 0.02, 0)};
  IcpParams params;
  params.max_correspondence_distance = 0.2;
  params.max_source_points = 1000;
  params.seed = 3;
  const auto r = icp(src, truth.apply(src), params);
  EXPECT_LE(max_abs_diff(r.transform, truth), 1e-6);
  // Same seed, same subset, same answer.
  const auto again = icp(src, truth.apply(src), params);
  EXPECT_EQ(again.transform.rotation, r.transform.rotation);
  EXPECT_EQ(again.rmse_history, r.rmse_history);
}

TEST(Icp, InputErrors) {
  const auto pts = ellipsoid_cloud(100, 15);
  try {
    icp(std::vector<Vec3>{}, pts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyCloud);
  }
  IcpParams bad;
  bad.max_iterations = 0;
  EXPECT_THROW(icp(pts, pts, bad), Error);
}

TEST(RigidTransform, ComposeAndInverse) {
  const RigidTransform a{axis_angle(Vec3(1, 2, 3), 0.7), Vec3(1, -1, 2)};
  const RigidTransform b{axis_angle(Vec3(-1, 0, 3), 1.9), Vec3(0, 5, 0)};
  const Vec3 p(0.3, -0.2, 4);
  EXPECT_LE((a.compose(b)(p) - a(b(p))).norm(), 1e-12);
  EXPECT_LE(max_abs_diff(a.compose(a.inverse()), RigidTransform::identity()), 1e-12);
}

TEST(RigidTransform, JsonRoundTrip) {
  IcpResult r;
  r.transform = {axis_angle(Vec3(1, 2, 3), 0.7), Vec3(1, -1, 2)};
  r.final_rmse = 0.125;
  r.iterations_used = 7;
  r.converged = true;
  const auto back = icp_result_from_json(nlohmann::json::parse(to_json(r).dump()));
  EXPECT_EQ(back.transform.rotation, r.transform.rotation);
  EXPECT_EQ(back.transform.translation, r.transform.translation);
  EXPECT_EQ(back.final_rmse, 0.125);
  EXPECT_EQ(back.iterations_used, 7);
  EXPECT_TRUE(back.converged);
  EXPECT_THROW(rigid_transform_from_json(nlohmann::json{{"rotation", {1, 2}}}), Error);
}

}  // namespace
