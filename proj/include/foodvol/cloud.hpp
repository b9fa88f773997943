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

#include <cstdint>
#include <string>
#include <vector>

#include "foodvol/mesh.hpp"

namespace foodvol {

/// Points drawn from a mesh surface. Regenerating with the same mesh,
/// sample_count and seed reproduces `points` exactly.
struct SampledCloud {
  std::vector<Vec3> points;
  std::string source_mesh_id;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
};

/// Wraps raw points (e.g. a transformed copy) as a cloud.
inline SampledCloud make_cloud(std::vector<Vec3> points, std::string id = {},
                               std::uint64_t seed = 0) {
  SampledCloud c;
  c.sample_count = points.size();
  c.points = std::move(points);
  c.source_mesh_id = std::move(id);
  c.seed = seed;
  return c;
}

}  // namespace foodvol
