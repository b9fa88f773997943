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

// Per-scene evaluation (clean -> scale -> volume -> register -> score) and
// multi-scene reports with Mean / Stdev. / Rel. footer rows.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "foodvol/error.hpp"
#include "foodvol/mesh.hpp"
#include "foodvol/mesh_io.hpp"
#include "foodvol/metrics.hpp"
#include "foodvol/registration.hpp"
#include "foodvol/scale.hpp"
#include "foodvol/topology.hpp"
#include "foodvol/volume.hpp"

namespace foodvol {

/// Cubic metres per one unit of `tag` (m3, dm3, l, cm3, ml, mm3).
inline double cubic_meters_per_unit(std::string_view tag) {
  std::string t(tag);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "m3") return 1.0;
  if (t == "dm3" || t == "l") return 1e-3;
  if (t == "cm3" || t == "ml") return 1e-6;
  if (t == "mm3") return 1e-9;
  throw Error(ErrorKind::kInvalidArgument, "unknown volume unit '" + std::string(tag) + "'");
}

struct GroundTruthVolume {
  double value = 0.0;
  std::string unit = "m3";
};

/// One food scene. The food mesh and corners are in reconstruction (model)
/// units; the ground-truth mesh, when given, is in metres.
struct SceneManifest {
  std::string scene_id;
  std::string food_label;
  std::filesystem::path food_mesh_path;
  std::filesystem::path reference_corners_path;
  std::optional<std::filesystem::path> ground_truth_mesh_path;
  std::optional<GroundTruthVolume> ground_truth_volume;
  /// Unit for reported volumes when no ground-truth volume fixes one.
  std::string volume_unit = "m3";
  double delta = 0.05;
};

struct RunOptions {
  std::size_t samples = kDefaultSampleCount;
  std::uint64_t seed = 0;
  /// Overrides the manifest's delta when set.
  std::optional<double> delta;
  DiameterReference diameter_reference = DiameterReference::kLargestComponent;
  VolumeMethod volume_method = VolumeMethod::kDivergence;
  ChamferVariant chamfer_variant = ChamferVariant::kMeanDistance;
  IcpParams icp;
};

/// One table row. Volumes are in `volume_unit`; Chamfer values in metres.
struct EvaluationRecord {
  std::string scene_id;
  std::string label;
  std::string volume_unit = "m3";
  double v_pred = 0.0;
  std::optional<double> v_true;
  std::optional<double> abs_error;
  std::optional<double> ape_percent;
  std::optional<double> chamfer_pre_icp;
  std::optional<double> chamfer_post_icp;
  double scale_s = 0.0;
  std::optional<IcpResult> icp;
  std::size_t components_removed = 0;
  std::size_t open_edges = 0;
};

inline bool operator==(const IcpResult& a, const IcpResult& b) {
  return a.transform.rotation == b.transform.rotation &&
         a.transform.translation == b.transform.translation &&
         a.final_rmse == b.final_rmse && a.iterations_used == b.iterations_used &&
         a.converged == b.converged;
}

inline bool operator==(const EvaluationRecord& a, const EvaluationRecord& b) {
  return a.scene_id == b.scene_id && a.label == b.label && a.volume_unit == b.volume_unit &&
         a.v_pred == b.v_pred && a.v_true == b.v_true && a.abs_error == b.abs_error &&
         a.ape_percent == b.ape_percent && a.chamfer_pre_icp == b.chamfer_pre_icp &&
         a.chamfer_post_icp == b.chamfer_post_icp && a.scale_s == b.scale_s &&
         a.icp == b.icp && a.components_removed == b.components_removed &&
         a.open_edges == b.open_edges;
}

/// Numeric columns aggregated in reports, in output order.
inline constexpr std::array<std::string_view, 7> kReportColumns = {
    "v_pred", "v_true", "abs_error", "ape_percent", "chamfer_pre_icp", "chamfer_post_icp",
    "scale_s"};

inline std::optional<double> column_value(const EvaluationRecord& r, std::string_view column) {
  if (column == "v_pred") return r.v_pred;
  if (column == "v_true") return r.v_true;
  if (column == "abs_error") return r.abs_error;
  if (column == "ape_percent") return r.ape_percent;
  if (column == "chamfer_pre_icp") return r.chamfer_pre_icp;
  if (column == "chamfer_post_icp") return r.chamfer_post_icp;
  if (column == "scale_s") return r.scale_s;
  throw Error(ErrorKind::kInvalidArgument, "unknown column '" + std::string(column) + "'");
}

/// Column name -> value; a missing key means the value is absent.
using ColumnStats = std::map<std::string, double>;

/// Relative difference of a baseline against ours, in percent:
/// (baseline_mean - ours_mean) / ours_mean * 100. Positive means the
/// baseline mean is larger (worse, for error columns).
struct RelativeRow {
  std::string baseline;
  ColumnStats percent;

  friend bool operator==(const RelativeRow&, const RelativeRow&) = default;
};

struct Baseline {
  std::string name;
  ColumnStats mean;
};

struct Report {
  std::vector<EvaluationRecord> records;
  ColumnStats mean;
  /// Sample standard deviation (n - 1); absent for columns with < 2 values.
  ColumnStats stdev;
  std::vector<RelativeRow> relative_rows;

  friend bool operator==(const Report&, const Report&) = default;
};

inline double relative_percent(double baseline_mean, double ours_mean) {
  return (baseline_mean - ours_mean) / ours_mean * 100.0;
}

inline Report aggregate(std::vector<EvaluationRecord> records,
                        const std::vector<Baseline>& baselines = {}) {
  if (records.empty()) throw Error(ErrorKind::kEmptyInput, "no records to aggregate");
  Report report;
  report.records = std::move(records);
  for (auto column : kReportColumns) {
    std::vector<double> values;
    for (const auto& r : report.records) {
      if (auto v = column_value(r, column)) values.push_back(*v);
    }
    if (values.empty()) continue;
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    report.mean[std::string(column)] = mean;
    if (values.size() >= 2) {
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      report.stdev[std::string(column)] = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
  }
  for (const auto& b : baselines) {
    RelativeRow row{b.name, {}};
    for (const auto& [column, ours] : report.mean) {
      auto it = b.mean.find(column);
      if (it != b.mean.end() && ours != 0.0) {
        row.percent[column] = relative_percent(it->second, ours);
      }
    }
    report.relative_rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Manifests

inline SceneManifest manifest_from_json(const nlohmann::json& j,
                                        const std::filesystem::path& base_dir = {}) {
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  SceneManifest m;
  try {
    m.scene_id = j.at("scene_id").get<std::string>();
    m.food_label = j.value("food_label", std::string{});
    m.food_mesh_path = resolve(j.at("food_mesh").get<std::string>());
    m.reference_corners_path = resolve(j.at("reference_corners").get<std::string>());
    if (j.contains("ground_truth_mesh") && !j["ground_truth_mesh"].is_null()) {
      m.ground_truth_mesh_path = resolve(j["ground_truth_mesh"].get<std::string>());
    }
    if (j.contains("ground_truth_volume") && !j["ground_truth_volume"].is_null()) {
      const auto& g = j["ground_truth_volume"];
      GroundTruthVolume gt;
      gt.value = g.at("value").get<double>();
      gt.unit = g.value("unit", std::string("m3"));
      m.ground_truth_volume = gt;
    }
    m.volume_unit = j.value("volume_unit", m.ground_truth_volume ? m.ground_truth_volume->unit
                                                                   : std::string("m3"));
    m.delta = j.value("delta", 0.05);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("scene manifest: ") + e.what());
  }
  if (m.ground_truth_volume) {
    cubic_meters_per_unit(m.ground_truth_volume->unit);
    if (!(m.ground_truth_volume->value > 0.0)) {
      throw Error(ErrorKind::kNonPositiveTrueVolume,
                  "scene " + m.scene_id + ": ground_truth_volume must be positive");
    }
  }
  cubic_meters_per_unit(m.volume_unit);
  if (!(m.delta >= 0.0 && m.delta <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "scene " + m.scene_id + ": delta must lie in [0, 1]");
  }
  return m;
}

/// Paths are written relative to `base_dir` when they live under it.
inline nlohmann::json to_json(const SceneManifest& m, const std::filesystem::path& base_dir = {}) {
  auto rel = [&](const std::filesystem::path& p) {
    return base_dir.empty() ? p.generic_string() : p.lexically_relative(base_dir).generic_string();
  };
  nlohmann::json j = {{"scene_id", m.scene_id},
                      {"food_label", m.food_label},
                      {"food_mesh", rel(m.food_mesh_path)},
                      {"reference_corners", rel(m.reference_corners_path)},
                      {"volume_unit", m.volume_unit},
                      {"delta", m.delta}};
  if (m.ground_truth_mesh_path) j["ground_truth_mesh"] = rel(*m.ground_truth_mesh_path);
  if (m.ground_truth_volume) {
    j["ground_truth_volume"] = {{"value", m.ground_truth_volume->value},
                                {"unit", m.ground_truth_volume->unit}};
  }
  return j;
}

namespace harness_detail {

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, path.string() + ": " + e.what());
  }
}

inline void append_manifests(const nlohmann::json& j, const std::filesystem::path& dir,
                             std::vector<SceneManifest>& out) {
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(manifest_from_json(item, dir));
  } else if (j.is_object() && j.contains("scenes")) {
    for (const auto& item : j["scenes"]) out.push_back(manifest_from_json(item, dir));
  } else {
    out.push_back(manifest_from_json(j, dir));
  }
}

}  // namespace harness_detail

/// A manifest file holds one scene object, an array of them, or
/// {"scenes": [...]}. A directory is searched recursively for manifest.json
/// files, visited in path order.
inline std::vector<SceneManifest> load_manifests(const std::filesystem::path& path) {
  std::vector<SceneManifest> out;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().filename() == "manifest.json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      harness_detail::append_manifests(harness_detail::read_json_file(f), f.parent_path(), out);
    }
  } else {
    harness_detail::append_manifests(harness_detail::read_json_file(path), path.parent_path(), out);
  }
  if (out.empty()) throw Error(ErrorKind::kEmptyInput, "no scenes found under '" + path.string() + "'");
  return out;
}

// ---------------------------------------------------------------------------
// Scene evaluation

namespace harness_detail {

template <typename F>
auto stage(const SceneManifest& m, const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(m.scene_id, name, e);
  }
}

}  // namespace harness_detail

/// Runs load -> clean -> scale -> volume -> (sample, Chamfer, ICP, Chamfer)
/// for one scene. Only the food mesh is cleaned; the corners are used as-is.
inline EvaluationRecord run_scene(const SceneManifest& manifest, const RunOptions& options = {}) {
  using harness_detail::stage;
  EvaluationRecord rec;
  rec.scene_id = manifest.scene_id;
  rec.label = manifest.food_label;
  rec.volume_unit = manifest.volume_unit;
  const double delta = options.delta.value_or(manifest.delta);

  const TriangleMesh raw = stage(manifest, "load", [&] { return load_mesh(manifest.food_mesh_path); });
  const TriangleMesh cleaned = stage(manifest, "clean", [&] {
    return remove_isolated_pieces(raw, delta, options.diameter_reference);
  });
  rec.components_removed = connected_components(raw).component_count -
                           connected_components(cleaned).component_count;

  const ScaleEstimate scale = stage(manifest, "scale", [&] {
    return estimate_scale(load_corner_grid(manifest.reference_corners_path));
  });
  rec.scale_s = scale.s;

  const TriangleMesh scaled = stage(manifest, "apply_scale", [&] { return apply_scale(cleaned, scale.s); });
  const VolumeResult vol = stage(manifest, "volume", [&] {
    return compute_volume(scaled, options.volume_method);
  });
  rec.open_edges = vol.open_edges;
  const double per_unit = cubic_meters_per_unit(manifest.volume_unit);
  rec.v_pred = vol.volume / per_unit;

  std::optional<TriangleMesh> gt_mesh;
  if (manifest.ground_truth_mesh_path) {
    gt_mesh = stage(manifest, "load_ground_truth",
                    [&] { return load_mesh(*manifest.ground_truth_mesh_path); });
  }

  if (manifest.ground_truth_volume) {
    rec.v_true = manifest.ground_truth_volume->value *
                 cubic_meters_per_unit(manifest.ground_truth_volume->unit) / per_unit;
  } else if (gt_mesh) {
    rec.v_true = volume_divergence(*gt_mesh).volume / per_unit;
  }
  if (rec.v_true) {
    rec.abs_error = std::abs(*rec.v_true - rec.v_pred);
    rec.ape_percent = stage(manifest, "score", [&] { return ape(*rec.v_true, rec.v_pred); });
  }

  if (gt_mesh) {
    const SampledCloud pred_cloud = stage(manifest, "sample", [&] {
      return sample_surface(scaled, options.samples, options.seed, manifest.scene_id + "/pred");
    });
    const SampledCloud gt_cloud = stage(manifest, "sample_ground_truth", [&] {
      return sample_surface(*gt_mesh, options.samples, options.seed, manifest.scene_id + "/gt");
    });
    rec.chamfer_pre_icp = stage(manifest, "chamfer", [&] {
      return chamfer_distance(pred_cloud, gt_cloud, options.chamfer_variant).value;
    });
    IcpParams icp_params = options.icp;
    icp_params.seed = options.seed;
    rec.icp = stage(manifest, "icp", [&] { return icp(pred_cloud, gt_cloud, icp_params); });
    const std::vector<Vec3> aligned = rec.icp->transform.apply(pred_cloud.points);
    rec.chamfer_post_icp = stage(manifest, "chamfer_aligned", [&] {
      return chamfer_distance(std::span<const Vec3>(aligned), std::span<const Vec3>(gt_cloud.points),
                              options.chamfer_variant)
          .value;
    });
  }
  return rec;
}

inline std::vector<EvaluationRecord> run_batch(const std::vector<SceneManifest>& manifests,
                                               const RunOptions& options = {}) {
  std::vector<EvaluationRecord> out;
  out.reserve(manifests.size());
  for (const auto& m : manifests) out.push_back(run_scene(m, options));
  return out;
}

// ---------------------------------------------------------------------------
// Report serialisation

inline std::string format_fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline nlohmann::json to_json(const EvaluationRecord& r) {
  nlohmann::json j = {{"scene_id", r.scene_id},
                      {"label", r.label},
                      {"volume_unit", r.volume_unit},
                      {"v_pred", r.v_pred},
                      {"scale_s", r.scale_s},
                      {"components_removed", r.components_removed},
                      {"open_edges", r.open_edges}};
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("v_true", r.v_true);
  put("abs_error", r.abs_error);
  put("ape_percent", r.ape_percent);
  put("chamfer_pre_icp", r.chamfer_pre_icp);
  put("chamfer_post_icp", r.chamfer_post_icp);
  if (r.icp) j["icp"] = to_json(*r.icp);
  nlohmann::json display;
  for (auto column : kReportColumns) {
    if (auto v = column_value(r, column)) display[std::string(column)] = format_fixed4(*v);
  }
  j["display"] = std::move(display);
  return j;
}

inline EvaluationRecord record_from_json(const nlohmann::json& j) {
  EvaluationRecord r;
  r.scene_id = j.at("scene_id").get<std::string>();
  r.label = j.value("label", std::string{});
  r.volume_unit = j.value("volume_unit", std::string("m3"));
  r.v_pred = j.at("v_pred").get<double>();
  r.scale_s = j.at("scale_s").get<double>();
  r.components_removed = j.value("components_removed", std::size_t{0});
  r.open_edges = j.value("open_edges", std::size_t{0});
  auto get = [&](const char* key) -> std::optional<double> {
    if (j.contains(key)) return j[key].get<double>();
    return std::nullopt;
  };
  r.v_true = get("v_true");
  r.abs_error = get("abs_error");
  r.ape_percent = get("ape_percent");
  r.chamfer_pre_icp = get("chamfer_pre_icp");
  r.chamfer_post_icp = get("chamfer_post_icp");
  if (j.contains("icp")) r.icp = icp_result_from_json(j["icp"]);
  return r;
}

inline nlohmann::json to_json(const Report& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) records.push_back(to_json(r));
  auto display = [](const ColumnStats& s) {
    nlohmann::json d = nlohmann::json::object();
    for (const auto& [k, v] : s) d[k] = format_fixed4(v);
    return d;
  };
  nlohmann::json rel = nlohmann::json::array();
  for (const auto& row : report.relative_rows) {
    rel.push_back({{"baseline", row.baseline}, {"percent", row.percent}});
  }
  return {{"records", std::move(records)},
          {"mean", report.mean},
          {"stdev", report.stdev},
          {"relative", std::move(rel)},
          {"display", {{"mean", display(report.mean)}, {"stdev", display(report.stdev)}}}};
}

inline Report report_from_json(const nlohmann::json& j) {
  Report report;
  try {
    for (const auto& r : j.at("records")) report.records.push_back(record_from_json(r));
    report.mean = j.at("mean").get<ColumnStats>();
    report.stdev = j.value("stdev", ColumnStats{});
    if (j.contains("relative")) {
      for (const auto& row : j["relative"]) {
        report.relative_rows.push_back(
            {row.at("baseline").get<std::string>(), row.at("percent").get<ColumnStats>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("report: ") + e.what());
  }
  return report;
}

/// Baseline from a previously written JSON report (its "mean" row).
inline Baseline load_baseline(const std::string& name, const std::filesystem::path& path) {
  return {name, report_from_json(harness_detail::read_json_file(path)).mean};
}

inline std::string report_to_csv(const Report& report) {
  std::ostringstream out;
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  out << "scene_id,label,volume_unit";
  for (auto c : kReportColumns) out << ',' << c;
  out << '\n';
  for (const auto& r : report.records) {
    out << quote(r.scene_id) << ',' << quote(r.label) << ',' << r.volume_unit;
    for (auto c : kReportColumns) {
      out << ',';
      if (auto v = column_value(r, c)) out << format_fixed4(*v);
    }
    out << '\n';
  }
  auto footer = [&](const std::string& name, const ColumnStats& row, const char* suffix) {
    out << quote(name) << ",-,-";
    for (auto c : kReportColumns) {
      out << ',';
      if (auto it = row.find(std::string(c)); it != row.end()) out << format_fixed4(it->second) << suffix;
    }
    out << '\n';
  };
  footer("Mean", report.mean, "");
  footer("Stdev.", report.stdev, "");
  for (const auto& row : report.relative_rows) footer("Rel. " + row.baseline, row.percent, "%");
  return out.str();
}

enum class ReportFormat { kCsv, kJson };

inline std::string render_report(const Report& report, ReportFormat format) {
  return format == ReportFormat::kCsv ? report_to_csv(report) : to_json(report).dump(2) + "\n";
}

inline void write_report(const Report& report, const std::filesystem::path& path,
                         ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot write '" + path.string() + "'");
  out << render_report(report, format);
  out.flush();
  if (!out) throw Error(ErrorKind::kIoFailure, "write failed for '" + path.string() + "'");
}

}  // namespace foodvol
