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

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "foodvol/error.hpp"

namespace foodvol {

using Vec3 = Eigen::Vector3d;
using Face = std::array<std::uint32_t, 3>;

/// Indexed triangle mesh. Coordinates are in model units until a metric
/// scale has been applied, in meters afterwards.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return faces.size(); }
  bool empty() const { return faces.empty() && vertices.empty(); }

  friend bool operator==(const TriangleMesh& a, const TriangleMesh& b) {
    return a.vertices == b.vertices && a.faces == b.faces;
  }
};

struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  bool valid() const { return (min.array() <= max.array()).all(); }
  double diagonal() const { return valid() ? (max - min).norm() : 0.0; }
  Vec3 center() const { return 0.5 * (min + max); }
  bool overlaps(const Aabb& o) const {
    return (min.array() <= o.max.array()).all() &&
           (o.min.array() <= max.array()).all();
  }
};

/// Throws if `mesh` breaks any TriangleMesh invariant: out-of-range index,
/// non-finite coordinate, or a face that repeats a vertex index.
inline void validate(const TriangleMesh& mesh) {
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (!mesh.vertices[i].allFinite()) {
      throw Error(ErrorKind::kNonFiniteCoordinate,
                  "vertex " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  const auto n = mesh.vertices.size();
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& t = mesh.faces[f];
    for (auto idx : t) {
      if (idx >= n) {
        throw Error(ErrorKind::kInvalidIndex,
                    "face " + std::to_string(f) + " references vertex " +
                        std::to_string(idx) + " but mesh has " +
                        std::to_string(n) + " vertices");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw Error(ErrorKind::kDegenerateFace,
                  "face " + std::to_string(f) + " repeats a vertex index");
    }
  }
}

inline Aabb bounding_box(std::span<const Vec3> points) {
  Aabb box;
  for (const auto& p : points) box.extend(p);
  return box;
}

/// Bounding box of the vertices referenced by at least one face.
inline Aabb referenced_bounding_box(const TriangleMesh& mesh) {
  Aabb box;
  for (const auto& f : mesh.faces) {
    for (auto i : f) box.extend(mesh.vertices[i]);
  }
  return box;
}

inline TriangleMesh translated(TriangleMesh mesh, const Vec3& offset) {
  for (auto& v : mesh.vertices) v += offset;
  return mesh;
}

inline TriangleMesh with_flipped_faces(TriangleMesh mesh) {
  for (auto& f : mesh.faces) std::swap(f[1], f[2]);
  return mesh;
}

/// Appends `other` to `mesh`, offsetting its face indices.
inline void append(TriangleMesh& mesh, const TriangleMesh& other) {
  const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
  mesh.vertices.insert(mesh.vertices.end(), other.vertices.begin(),
                       other.vertices.end());
  for (const auto& f : other.faces) {
    mesh.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
  }
}

/// Drops vertices no face references; surviving vertices keep their order.
inline TriangleMesh without_unreferenced_vertices(const TriangleMesh& mesh) {
  constexpr auto kUnused = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(mesh.vertices.size(), kUnused);
  for (const auto& f : mesh.faces) {
    for (auto i : f) remap[i] = 0;
  }
  TriangleMesh out;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (remap[i] == kUnused) continue;
    remap[i] = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.push_back(mesh.vertices[i]);
  }
  out.faces.reserve(mesh.faces.size());
  for (const auto& f : mesh.faces) {
    out.faces.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
  }
  return out;
}

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

}  // namespace foodvol
