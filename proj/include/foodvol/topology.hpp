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
#include <cstdint>
#include <numeric>
#include <vector>

#include "foodvol/error.hpp"
#include "foodvol/mesh.hpp"

namespace foodvol {

/// Partition of faces into shared-vertex connectivity classes. Ids are dense
/// and ordered by the smallest face index each component contains.
struct ComponentLabeling {
  std::vector<std::uint32_t> component_of_face;
  std::size_t component_count = 0;
};

struct ComponentStats {
  std::uint32_t id = 0;
  std::size_t face_count = 0;
  std::size_t vertex_count = 0;
  /// Axis-aligned bounding-box diagonal of the component's vertices.
  double diameter = 0.0;
};

/// What a piece's diameter is compared against when cleaning.
enum class DiameterReference {
  kLargestComponent,  // diam(largest piece), the default
  kWholeMesh,         // AABB diagonal of the entire mesh
};

namespace topology_detail {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace topology_detail

inline ComponentLabeling connected_components(const TriangleMesh& mesh) {
  topology_detail::DisjointSet sets(mesh.vertices.size());
  for (const auto& f : mesh.faces) {
    sets.unite(f[0], f[1]);
    sets.unite(f[1], f[2]);
  }
  constexpr auto kUnassigned = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> id_of_root(mesh.vertices.size(), kUnassigned);
  ComponentLabeling out;
  out.component_of_face.reserve(mesh.faces.size());
  for (const auto& f : mesh.faces) {
    auto root = sets.find(f[0]);
    if (id_of_root[root] == kUnassigned) {
      id_of_root[root] = static_cast<std::uint32_t>(out.component_count++);
    }
    out.component_of_face.push_back(id_of_root[root]);
  }
  return out;
}

/// Per-component face/vertex counts and diameters, indexed by component id.
inline std::vector<ComponentStats> component_stats(const TriangleMesh& mesh,
                                                   const ComponentLabeling& labeling) {
  std::vector<ComponentStats> stats(labeling.component_count);
  std::vector<Aabb> boxes(labeling.component_count);
  std::vector<bool> seen(mesh.vertices.size(), false);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto id = labeling.component_of_face[f];
    ++stats[id].face_count;
    for (auto v : mesh.faces[f]) {
      boxes[id].extend(mesh.vertices[v]);
      if (!seen[v]) {
        seen[v] = true;
        ++stats[id].vertex_count;
      }
    }
  }
  for (std::size_t id = 0; id < stats.size(); ++id) {
    stats[id].id = static_cast<std::uint32_t>(id);
    stats[id].diameter = boxes[id].diagonal();
  }
  return stats;
}

inline double component_diameter(const TriangleMesh& mesh,
                                 const ComponentLabeling& labeling,
                                 std::uint32_t id) {
  if (id >= labeling.component_count) {
    throw Error(ErrorKind::kUnknownComponentId,
                "component " + std::to_string(id) + " of " +
                    std::to_string(labeling.component_count));
  }
  Aabb box;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (labeling.component_of_face[f] != id) continue;
    for (auto v : mesh.faces[f]) box.extend(mesh.vertices[v]);
  }
  return box.diagonal();
}

/// Keeps the faces of every component whose diameter strictly exceeds
/// `delta` times the reference diameter. Components tied for the largest
/// diameter are always kept. Unreferenced vertices are dropped; surviving
/// vertices and faces keep their relative order.
inline TriangleMesh remove_isolated_pieces(
    const TriangleMesh& mesh, double delta = 0.05,
    DiameterReference reference = DiameterReference::kLargestComponent) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "delta must lie in [0, 1]");
  }
  const auto labeling = connected_components(mesh);
  const auto stats = component_stats(mesh, labeling);
  double largest = 0.0;
  for (const auto& s : stats) largest = std::max(largest, s.diameter);
  const double reference_length = reference == DiameterReference::kLargestComponent
                                      ? largest
                                      : referenced_bounding_box(mesh).diagonal();
  const double threshold = delta * reference_length;

  std::vector<bool> keep(stats.size());
  for (const auto& s : stats) {
    keep[s.id] = s.diameter > threshold || s.diameter == largest;
  }
  TriangleMesh kept;
  kept.vertices = mesh.vertices;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (keep[labeling.component_of_face[f]]) kept.faces.push_back(mesh.faces[f]);
  }
  return without_unreferenced_vertices(kept);
}

}  // namespace foodvol
