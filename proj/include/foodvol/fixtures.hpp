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

// Deterministic analytic test assets: closed meshes with known volume,
// checkerboard corner grids with known scale, and decoy scenes.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "foodvol/error.hpp"
#include "foodvol/mesh.hpp"
#include "foodvol/random.hpp"
#include "foodvol/registration.hpp"
#include "foodvol/scale.hpp"
#include "foodvol/topology.hpp"

namespace foodvol {

/// Closed, outward-oriented a x b x c box centred on the origin.
inline TriangleMesh make_box(double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) {
    throw Error(ErrorKind::kNonPositiveDimension, "box edges must be positive");
  }
  const double x = a / 2, y = b / 2, z = c / 2;
  TriangleMesh m;
  m.vertices = {{-x, -y, -z}, {x, -y, -z}, {x, y, -z}, {-x, y, -z},
                {-x, -y, z},  {x, -y, z},  {x, y, z},  {-x, y, z}};
  m.faces = {{0, 2, 1}, {0, 3, 2},   // -z
             {4, 5, 6}, {4, 6, 7},   // +z
             {0, 1, 5}, {0, 5, 4},   // -y
             {3, 7, 6}, {3, 6, 2},   // +y
             {0, 4, 7}, {0, 7, 3},   // -x
             {1, 2, 6}, {1, 6, 5}};  // +x
  return m;
}

/// Geodesic sphere: a regular icosahedron inscribed in radius `r`, each face
/// split into four `subdivisions` times with new vertices pushed to the sphere.
inline TriangleMesh make_icosphere(double r, int subdivisions) {
  if (!(r > 0.0)) throw Error(ErrorKind::kNonPositiveDimension, "radius must be positive");
  if (subdivisions < 0 || subdivisions > 6) {
    throw Error(ErrorKind::kInvalidArgument, "subdivisions must be in 0..6");
  }
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : m.vertices) v.normalize();
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::unordered_map<std::uint64_t, std::uint32_t> midpoint;
    auto mid = [&](std::uint32_t a, std::uint32_t b) {
      const std::uint64_t key = (std::uint64_t{std::min(a, b)} << 32) | std::max(a, b);
      auto [it, inserted] = midpoint.try_emplace(key, 0);
      if (inserted) {
        it->second = static_cast<std::uint32_t>(m.vertices.size());
        m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      }
      return it->second;
    };
    std::vector<Face> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const auto ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }
  for (auto& v : m.vertices) v *= r;
  return m;
}

/// Ring torus around the z axis with tube centre radius `major` and tube
/// radius `minor`.
inline TriangleMesh make_torus(double major, double minor, int major_segments = 128,
                               int minor_segments = 64) {
  if (!(major > 0.0 && minor > 0.0)) {
    throw Error(ErrorKind::kNonPositiveDimension, "torus radii must be positive");
  }
  if (minor >= major) throw Error(ErrorKind::kInvalidArgument, "minor radius must be < major");
  if (major_segments < 3 || minor_segments < 3) {
    throw Error(ErrorKind::kInvalidArgument, "torus needs at least 3 segments per ring");
  }
  TriangleMesh m;
  const auto nu = static_cast<std::uint32_t>(major_segments);
  const auto nv = static_cast<std::uint32_t>(minor_segments);
  for (std::uint32_t i = 0; i < nu; ++i) {
    const double u = 2.0 * std::numbers::pi * i / nu;
    for (std::uint32_t j = 0; j < nv; ++j) {
      const double v = 2.0 * std::numbers::pi * j / nv;
      const double ring = major + minor * std::cos(v);
      m.vertices.emplace_back(ring * std::cos(u), ring * std::sin(u), minor * std::sin(v));
    }
  }
  auto at = [&](std::uint32_t i, std::uint32_t j) { return (i % nu) * nv + (j % nv); };
  for (std::uint32_t i = 0; i < nu; ++i) {
    for (std::uint32_t j = 0; j < nv; ++j) {
      const auto a = at(i, j), b = at(i + 1, j), c = at(i + 1, j + 1), d = at(i, j + 1);
      m.faces.push_back({a, b, c});
      m.faces.push_back({a, c, d});
    }
  }
  return m;
}

/// Volume of a regular icosahedron with circumradius `r`.
inline double icosahedron_volume(double r) {
  const double edge = r / std::sin(2.0 * std::numbers::pi / 5.0);
  return 5.0 / 12.0 * (3.0 + std::sqrt(5.0)) * edge * edge * edge;
}

/// Planar rows x cols grid of corners `spacing` apart, centred on the origin
/// of the xy-plane, moved by `pose`, then jittered by isotropic Gaussian
/// noise of standard deviation `noise_sigma`.
inline CornerGrid make_corner_grid(std::size_t rows, std::size_t cols, double spacing,
                                   double square_size_real,
                                   const RigidTransform& pose = {},
                                   double noise_sigma = 0.0, std::uint64_t seed = 0) {
  if (rows < 2 || cols < 2 || !(spacing > 0.0) || !(square_size_real > 0.0) ||
      !(noise_sigma >= 0.0)) {
    throw Error(ErrorKind::kInvalidDimensions,
                "corner grid needs rows, cols >= 2 and positive spacing and size");
  }
  CornerGrid grid;
  grid.rows = rows;
  grid.cols = cols;
  grid.square_size_real = square_size_real;
  const double cx = 0.5 * static_cast<double>(cols - 1) * spacing;
  const double cy = 0.5 * static_cast<double>(rows - 1) * spacing;
  Rng rng(seed);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      Vec3 p(static_cast<double>(c) * spacing - cx, static_cast<double>(r) * spacing - cy, 0.0);
      p = pose(p);
      if (noise_sigma > 0.0) {
        p += noise_sigma * Vec3(rng.normal(), rng.normal(), rng.normal());
      }
      grid.corners.push_back(p);
    }
  }
  return grid;
}

enum class FixtureKind { kBox, kIcosphere, kTorus, kMultiComponent, kCornerGrid };

constexpr std::string_view to_string(FixtureKind k) {
  switch (k) {
    case FixtureKind::kBox: return "box";
    case FixtureKind::kIcosphere: return "icosphere";
    case FixtureKind::kTorus: return "torus";
    case FixtureKind::kMultiComponent: return "multi_component";
    case FixtureKind::kCornerGrid: return "corner_grid";
  }
  return "unknown";
}

inline FixtureKind fixture_kind_from_string(std::string_view s) {
  for (auto k : {FixtureKind::kBox, FixtureKind::kIcosphere, FixtureKind::kTorus,
                 FixtureKind::kMultiComponent, FixtureKind::kCornerGrid}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorKind::kParseError, "unknown fixture kind '" + std::string(s) + "'");
}

struct DecoySpec;

/// Declarative description of one fixture. Parameter names per kind:
///   box:             a, b, c
///   icosphere:       radius, subdivisions
///   torus:           major_radius, minor_radius, major_segments, minor_segments
///   multi_component: uses `base` and `decoys`
///   corner_grid:     rows, cols, spacing, square_size_real_m, noise_sigma
///                    (plus `pose`)
struct FixtureSpec {
  FixtureKind kind = FixtureKind::kBox;
  std::map<std::string, double> parameters;
  std::uint64_t seed = 0;
  std::shared_ptr<const FixtureSpec> base;
  std::vector<DecoySpec> decoys;
  RigidTransform pose;

  double param(const std::string& name) const {
    auto it = parameters.find(name);
    if (it == parameters.end()) {
      throw Error(ErrorKind::kInvalidArgument, std::string(to_string(kind)) +
                                                   " fixture needs parameter '" + name + "'");
    }
    return it->second;
  }
  double param(const std::string& name, double fallback) const {
    auto it = parameters.find(name);
    return it == parameters.end() ? fallback : it->second;
  }
};

/// A decoy piece: `spec` rescaled so its diameter is `relative_diameter`
/// times the base diameter, centred at base centre + `offset`.
struct DecoySpec {
  FixtureSpec spec;
  double relative_diameter = 0.0;
  Vec3 offset = Vec3::Zero();
};

struct FixtureTruth {
  std::optional<double> volume;
  std::optional<double> scale;
};

inline FixtureSpec box_spec(double a, double b, double c) {
  FixtureSpec s;
  s.parameters = {{"a", a}, {"b", b}, {"c", c}};
  return s;
}
inline FixtureSpec icosphere_spec(double radius, int subdivisions) {
  FixtureSpec s;
  s.kind = FixtureKind::kIcosphere;
  s.parameters = {{"radius", radius}, {"subdivisions", subdivisions}};
  return s;
}
inline FixtureSpec torus_spec(double major, double minor) {
  FixtureSpec s;
  s.kind = FixtureKind::kTorus;
  s.parameters = {{"major_radius", major}, {"minor_radius", minor}};
  return s;
}

/// Analytic volume / scale of the idealised shape the fixture approximates.
/// Multi-component truth is the base volume (decoys are meant to be removed).
inline FixtureTruth analytic_truth(const FixtureSpec& spec) {
  switch (spec.kind) {
    case FixtureKind::kBox:
      return {spec.param("a") * spec.param("b") * spec.param("c"), std::nullopt};
    case FixtureKind::kIcosphere: {
      const double r = spec.param("radius");
      return {4.0 / 3.0 * std::numbers::pi * r * r * r, std::nullopt};
    }
    case FixtureKind::kTorus:
      return {2.0 * std::numbers::pi * std::numbers::pi * spec.param("major_radius") *
                  spec.param("minor_radius") * spec.param("minor_radius"),
              std::nullopt};
    case FixtureKind::kMultiComponent:
      if (!spec.base) throw Error(ErrorKind::kInvalidArgument, "multi_component needs a base");
      return analytic_truth(*spec.base);
    case FixtureKind::kCornerGrid:
      return {std::nullopt, spec.param("square_size_real_m") / spec.param("spacing")};
  }
  return {};
}

/// Mesh with every component recorded for assertions. Component i occupies
/// faces [face_offsets[i], face_offsets[i] + face_counts[i]).
struct MultiComponentFixture {
  TriangleMesh mesh;
  std::vector<double> diameters;
  std::vector<std::size_t> face_offsets;
  std::vector<std::size_t> face_counts;
  std::vector<Aabb> boxes;
};

inline TriangleMesh make_fixture_mesh(const FixtureSpec& spec);

inline MultiComponentFixture make_multi_component(const FixtureSpec& base,
                                                  const std::vector<DecoySpec>& decoys) {
  MultiComponentFixture out;
  auto add = [&](const TriangleMesh& piece) {
    const Aabb box = referenced_bounding_box(piece);
    for (std::size_t i = 0; i < out.boxes.size(); ++i) {
      if (box.overlaps(out.boxes[i])) {
        throw Error(ErrorKind::kOverlapDetected,
                    "component " + std::to_string(out.boxes.size()) +
                        " overlaps component " + std::to_string(i));
      }
    }
    out.face_offsets.push_back(out.mesh.faces.size());
    out.face_counts.push_back(piece.faces.size());
    out.diameters.push_back(box.diagonal());
    out.boxes.push_back(box);
    append(out.mesh, piece);
  };

  const TriangleMesh base_mesh = make_fixture_mesh(base);
  const Aabb base_box = referenced_bounding_box(base_mesh);
  add(base_mesh);
  for (const auto& decoy : decoys) {
    if (!(decoy.relative_diameter > 0.0)) {
      throw Error(ErrorKind::kNonPositiveDimension, "decoy relative diameter must be positive");
    }
    TriangleMesh piece = make_fixture_mesh(decoy.spec);
    const Aabb box = referenced_bounding_box(piece);
    const double k = decoy.relative_diameter * base_box.diagonal() / box.diagonal();
    const Vec3 shift = base_box.center() + decoy.offset - k * box.center();
    for (auto& v : piece.vertices) v = k * v + shift;
    add(piece);
  }
  return out;
}

inline TriangleMesh make_fixture_mesh(const FixtureSpec& spec) {
  switch (spec.kind) {
    case FixtureKind::kBox:
      return make_box(spec.param("a"), spec.param("b"), spec.param("c"));
    case FixtureKind::kIcosphere:
      return make_icosphere(spec.param("radius"),
                            static_cast<int>(spec.param("subdivisions", 4)));
    case FixtureKind::kTorus:
      return make_torus(spec.param("major_radius"), spec.param("minor_radius"),
                        static_cast<int>(spec.param("major_segments", 128)),
                        static_cast<int>(spec.param("minor_segments", 64)));
    case FixtureKind::kMultiComponent:
      if (!spec.base) throw Error(ErrorKind::kInvalidArgument, "multi_component needs a base");
      return make_multi_component(*spec.base, spec.decoys).mesh;
    case FixtureKind::kCornerGrid:
      break;
  }
  throw Error(ErrorKind::kInvalidArgument, "corner_grid fixtures are not meshes");
}

inline CornerGrid make_fixture_grid(const FixtureSpec& spec) {
  if (spec.kind != FixtureKind::kCornerGrid) {
    throw Error(ErrorKind::kInvalidArgument, "fixture is not a corner_grid");
  }
  return make_corner_grid(static_cast<std::size_t>(spec.param("rows")),
                          static_cast<std::size_t>(spec.param("cols")), spec.param("spacing"),
                          spec.param("square_size_real_m"), spec.pose,
                          spec.param("noise_sigma", 0.0), spec.seed);
}

// JSON form: {"kind": "...", <parameters>..., "seed": N, "base": {...},
//             "decoys": [{"spec": {...}, "relative_diameter": x, "offset": [x,y,z]}],
//             "pose": {"rotation": [[...]], "translation": [...]}}

inline FixtureSpec fixture_spec_from_json(const nlohmann::json& j) {
  FixtureSpec spec;
  try {
    spec.kind = fixture_kind_from_string(j.at("kind").get<std::string>());
    for (const auto& [key, value] : j.items()) {
      if (value.is_number()) {
        if (key == "seed") {
          spec.seed = value.get<std::uint64_t>();
        } else {
          spec.parameters[key] = value.get<double>();
        }
      }
    }
    if (j.contains("base")) {
      spec.base = std::make_shared<const FixtureSpec>(fixture_spec_from_json(j["base"]));
    }
    if (j.contains("decoys")) {
      for (const auto& d : j["decoys"]) {
        DecoySpec decoy;
        decoy.spec = fixture_spec_from_json(d.at("spec"));
        decoy.relative_diameter = d.at("relative_diameter").get<double>();
        if (d.contains("offset")) {
          const auto& o = d["offset"];
          decoy.offset = Vec3(o.at(0).get<double>(), o.at(1).get<double>(), o.at(2).get<double>());
        }
        spec.decoys.push_back(std::move(decoy));
      }
    }
    if (j.contains("pose")) spec.pose = rigid_transform_from_json(j["pose"]);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("fixture spec: ") + e.what());
  }
  return spec;
}

inline nlohmann::json to_json(const FixtureSpec& spec) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(spec.kind));
  for (const auto& [k, v] : spec.parameters) j[k] = v;
  j["seed"] = spec.seed;
  if (spec.base) j["base"] = to_json(*spec.base);
  if (!spec.decoys.empty()) {
    nlohmann::json decoys = nlohmann::json::array();
    for (const auto& d : spec.decoys) {
      decoys.push_back({{"spec", to_json(d.spec)},
                        {"relative_diameter", d.relative_diameter},
                        {"offset", {d.offset.x(), d.offset.y(), d.offset.z()}}});
    }
    j["decoys"] = std::move(decoys);
  }
  if (spec.kind == FixtureKind::kCornerGrid) j["pose"] = to_json(spec.pose);
  return j;
}

}  // namespace foodvol
