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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "foodvol/cloud.hpp"
#include "foodvol/error.hpp"
#include "foodvol/kdtree.hpp"
#include "foodvol/mesh.hpp"
#include "foodvol/random.hpp"

namespace foodvol {

inline constexpr std::size_t kDefaultSampleCount = 100'000;

/// Area-weighted triangle choice followed by uniform barycentric placement.
inline SampledCloud sample_surface(const TriangleMesh& mesh, std::size_t n,
                                   std::uint64_t seed, std::string mesh_id = {}) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "sample count must be >= 1");
  std::vector<double> cumulative;
  cumulative.reserve(mesh.faces.size());
  double total = 0.0;
  for (const auto& f : mesh.faces) {
    total += triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw Error(ErrorKind::kZeroAreaMesh, "mesh has no surface area");

  SampledCloud cloud;
  cloud.source_mesh_id = std::move(mesh_id);
  cloud.sample_count = n;
  cloud.seed = seed;
  cloud.points.reserve(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    const auto& f = mesh.faces[static_cast<std::size_t>(it - cumulative.begin())];
    const double r1 = std::sqrt(rng.uniform());
    const double r2 = rng.uniform();
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    cloud.points.push_back((1.0 - r1) * a + r1 * (1.0 - r2) * b + r1 * r2 * c);
  }
  return cloud;
}

enum class ChamferVariant {
  kMeanDistance,  // mean of Euclidean NN distances (default)
  kMeanSquared,   // mean of squared NN distances
  kSumDistance,   // sum of Euclidean NN distances
};

struct ChamferResult {
  double value = 0.0;
  double forward_mean = 0.0;   // a -> b
  double backward_mean = 0.0;  // b -> a
};

namespace metrics_detail {

inline double directed(std::span<const Vec3> from, const KdTree& into,
                       ChamferVariant variant) {
  double sum = 0.0;
  for (const auto& p : from) {
    const double d2 = into.nearest(p).squared_distance;
    sum += variant == ChamferVariant::kMeanSquared ? d2 : std::sqrt(d2);
  }
  return variant == ChamferVariant::kSumDistance
             ? sum
             : sum / static_cast<double>(from.size());
}

}  // namespace metrics_detail

inline ChamferResult chamfer_distance(std::span<const Vec3> a, std::span<const Vec3> b,
                                      ChamferVariant variant = ChamferVariant::kMeanDistance) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::kEmptyCloud, "chamfer needs non-empty clouds");
  const KdTree tree_a(a);
  const KdTree tree_b(b);
  ChamferResult r;
  r.forward_mean = metrics_detail::directed(a, tree_b, variant);
  r.backward_mean = metrics_detail::directed(b, tree_a, variant);
  r.value = (r.forward_mean + r.backward_mean) / 2.0;
  return r;
}

inline ChamferResult chamfer_distance(const SampledCloud& a, const SampledCloud& b,
                                      ChamferVariant variant = ChamferVariant::kMeanDistance) {
  return chamfer_distance(std::span<const Vec3>(a.points), std::span<const Vec3>(b.points),
                          variant);
}

/// Absolute percentage error |v_true - v_pred| / v_true * 100.
inline double ape(double v_true, double v_pred) {
  if (!(v_true > 0.0)) {
    throw Error(ErrorKind::kNonPositiveTrueVolume,
                "true volume must be positive, got " + std::to_string(v_true));
  }
  return std::abs(v_true - v_pred) / v_true * 100.0;
}

/// Mean of ape over (v_true, v_pred) pairs.
inline double mape(std::span<const std::pair<double, double>> pairs) {
  if (pairs.empty()) throw Error(ErrorKind::kEmptyInput, "mape of an empty list");
  double sum = 0.0;
  for (const auto& [t, p] : pairs) sum += ape(t, p);
  return sum / static_cast<double>(pairs.size());
}

}  // namespace foodvol
