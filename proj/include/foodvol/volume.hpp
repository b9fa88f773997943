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

// Mesh volume from tetrahedra spanned by each face and the origin.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "foodvol/error.hpp"
#include "foodvol/mesh.hpp"

namespace foodvol {

enum class VolumeMethod {
  /// |sum of signed tetra volumes|. Exact for any closed, consistently
  /// oriented mesh.
  kDivergence,
  /// sum of |tetra volume|. Only correct for meshes star-shaped about the
  /// origin; kept for comparison.
  kPerFaceAbs,
};

constexpr std::string_view to_string(VolumeMethod m) {
  return m == VolumeMethod::kDivergence ? "divergence" : "per-face-abs";
}

struct VolumeResult {
  double volume = 0.0;
  double signed_raw = 0.0;
  VolumeMethod method = VolumeMethod::kDivergence;
  /// Edges not shared by exactly two faces. Non-zero means the divergence
  /// volume depends on where the origin is.
  std::size_t open_edges = 0;
  std::vector<std::string> diagnostics;
};

/// Number of undirected edges whose incidence count differs from two.
inline std::size_t count_open_edges(const TriangleMesh& mesh) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(mesh.faces.size() * 3);
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      auto a = f[k], b = f[(k + 1) % 3];
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(edges.begin(), edges.end());
  std::size_t open = 0;
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    if (j - i != 2) ++open;
    i = j;
  }
  return open;
}

inline double signed_tetra_volume(const Vec3& a, const Vec3& b, const Vec3& c) {
  return a.dot(b.cross(c)) / 6.0;
}

namespace volume_detail {

inline VolumeResult finish(VolumeResult r, const TriangleMesh& mesh) {
  r.open_edges = count_open_edges(mesh);
  if (r.open_edges > 0) {
    r.diagnostics.push_back("mesh has " + std::to_string(r.open_edges) +
                            " open or non-manifold edges; volume is origin-dependent");
  }
  return r;
}

}  // namespace volume_detail

inline VolumeResult volume_divergence(const TriangleMesh& mesh) {
  VolumeResult r;
  r.method = VolumeMethod::kDivergence;
  for (const auto& f : mesh.faces) {
    r.signed_raw += signed_tetra_volume(mesh.vertices[f[0]], mesh.vertices[f[1]],
                                        mesh.vertices[f[2]]);
  }
  r.volume = std::abs(r.signed_raw);
  return volume_detail::finish(std::move(r), mesh);
}

inline VolumeResult volume_per_face_abs(const TriangleMesh& mesh) {
  VolumeResult r;
  r.method = VolumeMethod::kPerFaceAbs;
  for (const auto& f : mesh.faces) {
    const double t = signed_tetra_volume(mesh.vertices[f[0]], mesh.vertices[f[1]],
                                         mesh.vertices[f[2]]);
    r.signed_raw += t;
    r.volume += std::abs(t);
  }
  return volume_detail::finish(std::move(r), mesh);
}

inline VolumeResult compute_volume(const TriangleMesh& mesh, VolumeMethod method) {
  return method == VolumeMethod::kDivergence ? volume_divergence(mesh)
                                             : volume_per_face_abs(mesh);
}

/// Multiplies every vertex by `s` (meters per model unit).
inline TriangleMesh apply_scale(TriangleMesh mesh, double s) {
  if (!(std::isfinite(s) && s > 0.0)) {
    throw Error(ErrorKind::kNonPositiveScale,
                "scale must be positive and finite, got " + std::to_string(s));
  }
  for (auto& v : mesh.vertices) v *= s;
  return mesh;
}

}  // namespace foodvol
