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

// Synthetic evaluation scenes written to disk in the layout the harness
// reads: food mesh and corners in model units, ground truth in metres.

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "foodvol/fixtures.hpp"
#include "foodvol/harness.hpp"
#include "foodvol/mesh_io.hpp"
#include "foodvol/volume.hpp"

namespace foodvol {

struct SceneFixtureSpec {
  std::string scene_id = "scene";
  std::string label;
  /// True food shape, in metres.
  FixtureSpec truth = box_spec(0.05, 0.04, 0.03);
  /// Shape the "reconstruction" produced, in metres; defaults to `truth`.
  std::optional<FixtureSpec> prediction;
  /// Metres per model unit of the written food mesh and corners.
  double model_scale = 0.1;
  /// Rigid motion of the prediction inside the model frame.
  RigidTransform model_pose;
  /// Pieces added to the food mesh to be removed by cleaning.
  std::vector<DecoySpec> decoys;
  std::size_t grid_rows = 7;
  std::size_t grid_cols = 10;
  double square_size_real_m = 0.012;
  /// Corner noise in model units.
  double grid_noise_sigma = 0.0;
  std::uint64_t grid_seed = 0;
  RigidTransform grid_pose;
  bool write_ground_truth_mesh = true;
  bool write_ground_truth_volume = true;
  std::string volume_unit = "cm3";
  double delta = 0.05;
};

inline SceneFixtureSpec scene_fixture_from_json(const nlohmann::json& j) {
  SceneFixtureSpec s;
  try {
    s.scene_id = j.at("scene_id").get<std::string>();
    s.label = j.value("label", std::string{});
    s.truth = fixture_spec_from_json(j.at("truth"));
    if (j.contains("prediction")) s.prediction = fixture_spec_from_json(j["prediction"]);
    s.model_scale = j.value("model_scale", s.model_scale);
    if (j.contains("model_pose")) s.model_pose = rigid_transform_from_json(j["model_pose"]);
    if (j.contains("decoys")) {
      nlohmann::json wrapper = {{"kind", "multi_component"}, {"decoys", j["decoys"]}};
      s.decoys = fixture_spec_from_json(wrapper).decoys;
    }
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      s.grid_rows = g.value("rows", s.grid_rows);
      s.grid_cols = g.value("cols", s.grid_cols);
      s.square_size_real_m = g.value("square_size_real_m", s.square_size_real_m);
      s.grid_noise_sigma = g.value("noise_sigma", s.grid_noise_sigma);
      s.grid_seed = g.value("seed", s.grid_seed);
      if (g.contains("pose")) s.grid_pose = rigid_transform_from_json(g["pose"]);
    }
    s.write_ground_truth_mesh = j.value("ground_truth_mesh", true);
    s.write_ground_truth_volume = j.value("ground_truth_volume", true);
    s.volume_unit = j.value("volume_unit", s.volume_unit);
    s.delta = j.value("delta", s.delta);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("scene fixture: ") + e.what());
  }
  return s;
}

/// Writes food.obj, corners.json, optionally ground_truth.obj, and
/// manifest.json into `dir`. Returns the manifest as written.
inline SceneManifest write_scene_fixture(const SceneFixtureSpec& spec,
                                         const std::filesystem::path& dir) {
  if (!(spec.model_scale > 0.0)) {
    throw Error(ErrorKind::kNonPositiveScale, "model_scale must be positive");
  }
  std::filesystem::create_directories(dir);
  const TriangleMesh truth = make_fixture_mesh(spec.truth);

  // Reconstruction in model units: metric prediction shrunk by 1/model_scale.
  TriangleMesh food = apply_scale(make_fixture_mesh(spec.prediction.value_or(spec.truth)),
                                  1.0 / spec.model_scale);
  food = transformed(std::move(food), spec.model_pose);
  if (!spec.decoys.empty()) {
    const Aabb box = referenced_bounding_box(food);
    for (const auto& decoy : spec.decoys) {
      TriangleMesh piece = make_fixture_mesh(decoy.spec);
      const Aabb pbox = referenced_bounding_box(piece);
      const double k = decoy.relative_diameter * box.diagonal() / pbox.diagonal();
      const Vec3 shift = box.center() + decoy.offset - k * pbox.center();
      for (auto& v : piece.vertices) v = k * v + shift;
      if (referenced_bounding_box(piece).overlaps(box)) {
        throw Error(ErrorKind::kOverlapDetected, "decoy overlaps the food mesh");
      }
      append(food, piece);
    }
  }

  SceneManifest m;
  m.scene_id = spec.scene_id;
  m.food_label = spec.label;
  m.food_mesh_path = dir / "food.obj";
  m.reference_corners_path = dir / "corners.json";
  m.volume_unit = spec.volume_unit;
  m.delta = spec.delta;
  save_mesh(food, m.food_mesh_path);

  const CornerGrid grid =
      make_corner_grid(spec.grid_rows, spec.grid_cols, spec.square_size_real_m / spec.model_scale,
                       spec.square_size_real_m, spec.grid_pose, spec.grid_noise_sigma,
                       spec.grid_seed);
  {
    std::ofstream out(m.reference_corners_path);
    if (!out) throw Error(ErrorKind::kIoFailure, "cannot write corners");
    out << to_json(grid).dump(2) << '\n';
  }
  if (spec.write_ground_truth_mesh) {
    m.ground_truth_mesh_path = dir / "ground_truth.obj";
    save_mesh(truth, *m.ground_truth_mesh_path);
  }
  if (spec.write_ground_truth_volume) {
    m.ground_truth_volume = GroundTruthVolume{
        volume_divergence(truth).volume / cubic_meters_per_unit(spec.volume_unit), spec.volume_unit};
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot write manifest");
  out << to_json(m, dir).dump(2) << '\n';
  return m;
}

}  // namespace foodvol
