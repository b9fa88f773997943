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

// Rigid registration: closed-form least-squares fit for known
// correspondences, and point-to-point ICP on top of it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "foodvol/cloud.hpp"
#include "foodvol/error.hpp"
#include "foodvol/kdtree.hpp"
#include "foodvol/mesh.hpp"
#include "foodvol/random.hpp"

namespace foodvol {

using Mat3 = Eigen::Matrix3d;

/// x -> rotation * x + translation, with rotation a proper rotation.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  Vec3 operator()(const Vec3& p) const { return rotation * p + translation; }

  /// (*this) after `inner`: x -> this(inner(x)).
  RigidTransform compose(const RigidTransform& inner) const {
    return {rotation * inner.rotation, rotation * inner.translation + translation};
  }

  RigidTransform inverse() const {
    const Mat3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  std::vector<Vec3> apply(std::span<const Vec3> points) const {
    std::vector<Vec3> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back((*this)(p));
    return out;
  }
};

inline TriangleMesh transformed(TriangleMesh mesh, const RigidTransform& t) {
  for (auto& v : mesh.vertices) v = t(v);
  return mesh;
}

/// Rotation of `angle_rad` about `axis` (normalized internally).
inline Mat3 axis_angle(const Vec3& axis, double angle_rad) {
  return Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
}

/// Largest element of |R^T R - I|.
inline double orthonormality_error(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
}

struct IcpParams {
  int max_iterations = 50;
  /// Stop once the RMSE changes by less than this between iterations.
  double convergence_eps = 1e-8;
  /// Correspondences farther apart than this are ignored (opt-in).
  std::optional<double> max_correspondence_distance;
  /// Seed for source subsampling; only used when max_source_points > 0.
  std::uint64_t seed = 0;
  /// Deterministic random subset of the source used for matching; 0 = all.
  std::size_t max_source_points = 0;
};

struct IcpResult {
  RigidTransform transform;
  double final_rmse = 0.0;
  int iterations_used = 0;
  bool converged = false;
  /// RMSE of the initial alignment followed by one entry per iteration.
  std::vector<double> rmse_history;
};

namespace registration_detail {

inline Vec3 centroid(std::span<const Vec3> pts) {
  Vec3 c = Vec3::Zero();
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

/// Nearest rotation in the Frobenius sense, reflection removed.
inline Mat3 project_to_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

}  // namespace registration_detail

/// Proper rigid transform minimizing sum |R s_i + t - t_i|^2 (Kabsch with
/// reflection correction).
inline RigidTransform best_rigid_fit(std::span<const Vec3> source,
                                     std::span<const Vec3> target) {
  if (source.size() != target.size()) {
    throw Error(ErrorKind::kInvalidArgument, "source and target differ in length");
  }
  if (source.size() < 3) {
    throw Error(ErrorKind::kInsufficientPoints, "need at least 3 point pairs");
  }
  const Vec3 cs = registration_detail::centroid(source);
  const Vec3 ct = registration_detail::centroid(target);
  Mat3 cov = Mat3::Zero();
  Mat3 spread = Mat3::Zero();
  for (std::size_t i = 0; i < source.size(); ++i) {
    const Vec3 a = source[i] - cs;
    cov += a * (target[i] - ct).transpose();
    spread += a * a.transpose();
  }
  Eigen::JacobiSVD<Mat3> spread_svd(spread);
  const auto sv_spread = spread_svd.singularValues();
  if (!(sv_spread[0] > 0.0) || sv_spread[1] <= 1e-12 * sv_spread[0]) {
    throw Error(ErrorKind::kDegenerateConfiguration, "source points are collinear");
  }
  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  if (!(sv[0] > 0.0) || sv[1] <= 1e-12 * sv[0]) {
    throw Error(ErrorKind::kDegenerateConfiguration,
                "cross-covariance has rank < 2; rotation is undetermined");
  }
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  if ((v * u.transpose()).determinant() < 0) d(2, 2) = -1.0;
  RigidTransform t;
  t.rotation = v * d * u.transpose();
  t.translation = ct - t.rotation * cs;
  return t;
}

/// Point-to-point ICP mapping `source` into the frame of `target`. The
/// source centroid is first moved onto the target centroid.
inline IcpResult icp(std::span<const Vec3> source, std::span<const Vec3> target,
                     const IcpParams& params = {}) {
  if (source.empty() || target.empty()) {
    throw Error(ErrorKind::kEmptyCloud, "icp needs two non-empty clouds");
  }
  if (params.max_iterations < 1 || !(params.convergence_eps > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "max_iterations must be >= 1 and convergence_eps > 0");
  }

  std::vector<Vec3> src;
  if (params.max_source_points > 0 && params.max_source_points < source.size()) {
    std::vector<std::uint32_t> idx(source.size());
    std::iota(idx.begin(), idx.end(), std::uint32_t{0});
    Rng rng(params.seed);
    for (std::size_t i = 0; i < params.max_source_points; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.next() % (idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(params.max_source_points);
    std::sort(idx.begin(), idx.end());
    for (auto i : idx) src.push_back(source[i]);
  } else {
    src.assign(source.begin(), source.end());
  }

  const KdTree tree(target);
  const double cutoff2 = params.max_correspondence_distance
                             ? *params.max_correspondence_distance *
                                   *params.max_correspondence_distance
                             : std::numeric_limits<double>::infinity();

  std::vector<Vec3> moved;
  std::vector<Vec3> matched;
  auto correspond = [&](const RigidTransform& t) {
    moved.clear();
    matched.clear();
    double sum = 0.0;
    for (const auto& p : src) {
      const Vec3 q = t(p);
      const auto nn = tree.nearest(q);
      if (nn.squared_distance > cutoff2) continue;
      moved.push_back(q);
      matched.push_back(target[nn.index]);
      sum += nn.squared_distance;
    }
    return matched.empty() ? std::numeric_limits<double>::infinity()
                           : std::sqrt(sum / static_cast<double>(matched.size()));
  };

  IcpResult result;
  result.transform.translation =
      registration_detail::centroid(target) - registration_detail::centroid(src);
  double previous = correspond(result.transform);
  result.rmse_history.push_back(previous);

  for (int it = 1; it <= params.max_iterations; ++it) {
    RigidTransform step;
    try {
      step = best_rigid_fit(moved, matched);
    } catch (const Error&) {
      // Too few or degenerate correspondences: keep the current estimate.
      break;
    }
    const RigidTransform candidate = step.compose(result.transform);
    const double rmse = correspond(candidate);
    if (rmse > previous) {
      // Without a cutoff this is rounding noise at the optimum; with one, a
      // changing inlier set. Either way keep the better pose and stop.
      result.converged = true;
      break;
    }
    result.transform = candidate;
    result.rmse_history.push_back(rmse);
    result.iterations_used = it;
    if (std::abs(previous - rmse) < params.convergence_eps) {
      result.converged = true;
      break;
    }
    previous = rmse;
  }
  result.transform.rotation =
      registration_detail::project_to_rotation(result.transform.rotation);
  result.final_rmse = result.rmse_history.back();
  return result;
}

inline IcpResult icp(const SampledCloud& source, const SampledCloud& target,
                     const IcpParams& params = {}) {
  return icp(std::span<const Vec3>(source.points), std::span<const Vec3>(target.points),
             params);
}

inline nlohmann::json to_json(const RigidTransform& t) {
  nlohmann::json rot = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    rot.push_back({t.rotation(r, 0), t.rotation(r, 1), t.rotation(r, 2)});
  }
  return {{"rotation", std::move(rot)},
          {"translation", {t.translation.x(), t.translation.y(), t.translation.z()}}};
}

inline RigidTransform rigid_transform_from_json(const nlohmann::json& j) {
  RigidTransform t;
  try {
    const auto& rot = j.at("rotation");
    const auto& tr = j.at("translation");
    if (rot.size() != 3 || tr.size() != 3) {
      throw Error(ErrorKind::kParseError, "rotation must be 3x3 and translation 3");
    }
    for (int r = 0; r < 3; ++r) {
      if (rot[r].size() != 3) throw Error(ErrorKind::kParseError, "rotation row needs 3 values");
      for (int c = 0; c < 3; ++c) t.rotation(r, c) = rot[r][c].get<double>();
      t.translation[r] = tr[r].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("rigid transform: ") + e.what());
  }
  return t;
}

inline nlohmann::json to_json(const IcpResult& r) {
  return {{"transform", to_json(r.transform)},
          {"final_rmse", r.final_rmse},
          {"iterations_used", r.iterations_used},
          {"converged", r.converged}};
}

inline IcpResult icp_result_from_json(const nlohmann::json& j) {
  IcpResult r;
  r.transform = rigid_transform_from_json(j.at("transform"));
  r.final_rmse = j.at("final_rmse").get<double>();
  r.iterations_used = j.at("iterations_used").get<int>();
  r.converged = j.at("converged").get<bool>();
  return r;
}

}  // namespace foodvol
