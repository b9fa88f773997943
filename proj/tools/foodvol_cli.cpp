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

// foodvol: command-line front end.
//
//   foodvol eval    --manifest <dir-or-file> --out <path> --format csv|json
//                   [--delta 0.05] [--samples 100000] [--seed N]
//                   [--baseline name=report.json ...]
//   foodvol fixture --spec spec.json --out dir/
//   foodvol volume  --mesh m.obj [--method divergence|per-face-abs]
//   foodvol clean   --mesh in.obj --delta 0.05 --out out.obj
//   foodvol scale   --corners c.json

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "foodvol/foodvol.hpp"

namespace fs = std::filesystem;
using namespace foodvol;

namespace {

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

/// Writes one fixture (mesh, grid or scene) into `dir`.
void emit_fixture(const nlohmann::json& j, const fs::path& dir) {
  fs::create_directories(dir);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "scene") {
    write_scene_fixture(scene_fixture_from_json(j), dir);
    return;
  }
  const FixtureSpec spec = fixture_spec_from_json(j);
  const FixtureTruth truth = analytic_truth(spec);
  nlohmann::json truth_json = {{"spec", to_json(spec)}};
  if (truth.volume) truth_json["volume"] = *truth.volume;
  if (truth.scale) truth_json["scale"] = *truth.scale;
  if (spec.kind == FixtureKind::kCornerGrid) {
    write_json(dir / "corners.json", to_json(make_fixture_grid(spec)));
  } else if (spec.kind == FixtureKind::kMultiComponent) {
    if (!spec.base) throw Error(ErrorKind::kInvalidArgument, "multi_component needs a base");
    const auto fixture = make_multi_component(*spec.base, spec.decoys);
    save_mesh(fixture.mesh, dir / "fixture.obj");
    truth_json["component_diameters"] = fixture.diameters;
    truth_json["component_face_counts"] = fixture.face_counts;
  } else {
    const TriangleMesh mesh = make_fixture_mesh(spec);
    save_mesh(mesh, dir / "fixture.obj");
    truth_json["mesh_volume"] = volume_divergence(mesh).volume;
  }
  write_json(dir / "truth.json", truth_json);
}

int run_fixture(const fs::path& spec_path, const fs::path& out_dir) {
  const nlohmann::json j = read_json(spec_path);
  if (j.contains("fixtures")) {
    std::size_t i = 0;
    for (const auto& item : j["fixtures"]) {
      std::string name = item.value("name", item.value("scene_id", std::string{}));
      if (name.empty()) name = "fixture_" + std::to_string(i);
      emit_fixture(item, out_dir / name);
      ++i;
    }
  } else {
    emit_fixture(j, out_dir);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-reconstruction food volume toolkit and evaluation harness"};
  app.require_subcommand(1);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate scenes and write a report");
  std::string manifest_path, out_path, format;
  std::optional<double> delta;
  std::size_t samples = kDefaultSampleCount;
  std::uint64_t seed = 0;
  std::vector<std::string> baselines;
  std::string diameter_ref = "largest";
  eval->add_option("--manifest", manifest_path, "Manifest file or directory")->required();
  eval->add_option("--out", out_path, "Report path")->required();
  eval->add_option("--format", format, "csv or json (default: from the --out extension)")->check(CLI::IsMember({"csv", "json"}));
  eval->add_option("--delta", delta, "Isolated-piece threshold (overrides manifests)");
  eval->add_option("--samples", samples, "Surface samples per mesh")->check(CLI::PositiveNumber);
  eval->add_option("--seed", seed, "Sampling seed");
  eval->add_option("--baseline", baselines, "name=report.json to compare against");
  eval->add_option("--diameter-reference", diameter_ref,
                   "Cleaning threshold reference: largest component or whole mesh")
      ->check(CLI::IsMember({"largest", "mesh"}));

  // fixture
  auto* fixture = app.add_subcommand("fixture", "Generate fixture meshes, grids or scenes");
  std::string spec_path, fixture_out;
  fixture->add_option("--spec", spec_path, "Fixture spec JSON")->required();
  fixture->add_option("--out", fixture_out, "Output directory")->required();

  // volume
  auto* volume = app.add_subcommand("volume", "Print the volume of a mesh");
  std::string volume_mesh, method = "divergence";
  volume->add_option("--mesh", volume_mesh, "Mesh (.obj or .ply)")->required();
  volume->add_option("--method", method, "divergence or per-face-abs")
      ->check(CLI::IsMember({"divergence", "per-face-abs"}));

  // clean
  auto* clean = app.add_subcommand("clean", "Remove isolated pieces from a mesh");
  std::string clean_in, clean_out;
  double clean_delta = 0.05;
  std::string clean_ref = "largest";
  clean->add_option("--mesh", clean_in, "Input mesh")->required();
  clean->add_option("--delta", clean_delta, "Relative diameter threshold")->check(CLI::Range(0.0, 1.0));
  clean->add_option("--out", clean_out, "Output mesh")->required();
  clean->add_option("--diameter-reference", clean_ref, "largest or mesh")
      ->check(CLI::IsMember({"largest", "mesh"}));

  // scale
  auto* scale = app.add_subcommand("scale", "Estimate metric scale from checkerboard corners");
  std::string corners_path;
  scale->add_option("--corners", corners_path, "Corner grid JSON")->required();

  CLI11_PARSE(app, argc, argv);

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (*eval) {
      RunOptions options;
      options.samples = samples;
      options.seed = seed;
      options.delta = delta;
      options.diameter_reference = diameter_ref == "mesh" ? DiameterReference::kWholeMesh
                                                          : DiameterReference::kLargestComponent;
      std::vector<Baseline> named;
      for (const auto& b : baselines) {
        const auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw Error(ErrorKind::kInvalidArgument, "--baseline expects name=report.json");
        }
        named.push_back(load_baseline(b.substr(0, eq), b.substr(eq + 1)));
      }
      const auto manifests = load_manifests(manifest_path);
      const Report report = aggregate(run_batch(manifests, options), named);
      if (format.empty()) format = fs::path(out_path).extension() == ".csv" ? "csv" : "json";
      write_report(report, out_path, format == "csv" ? ReportFormat::kCsv : ReportFormat::kJson);
      std::cerr << "evaluated " << report.records.size() << " scene(s) -> " << out_path << '\n';
    } else if (*fixture) {
      return run_fixture(spec_path, fixture_out);
    } else if (*volume) {
      const TriangleMesh mesh = load_mesh(volume_mesh);
      const VolumeResult r = compute_volume(
          mesh, method == "divergence" ? VolumeMethod::kDivergence : VolumeMethod::kPerFaceAbs);
      for (const auto& d : r.diagnostics) std::cerr << "warning [volume]: " << d << '\n';
      nlohmann::json out = {{"volume", r.volume},
                            {"signed_raw", r.signed_raw},
                            {"method", std::string(to_string(r.method))},
                            {"open_edges", r.open_edges}};
      std::cout << out.dump(2) << '\n';
    } else if (*clean) {
      const TriangleMesh mesh = load_mesh(clean_in);
      const TriangleMesh cleaned = remove_isolated_pieces(
          mesh, clean_delta,
          clean_ref == "mesh" ? DiameterReference::kWholeMesh : DiameterReference::kLargestComponent);
      save_mesh(cleaned, clean_out);
      std::cerr << "kept " << cleaned.face_count() << " of " << mesh.face_count() << " faces\n";
    } else if (*scale) {
      const ScaleEstimate est = estimate_scale(load_corner_grid(corners_path));
      std::cout << to_json(est).dump(2) << '\n';
    }
  } catch (const StageError& e) {
    std::cerr << "error " << e.what() << '\n';  // what() carries [scene/stage]
    return 2;
  } catch (const Error& e) {
    std::cerr << "error [" << stage << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error [" << stage << "]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
