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

// Metric scale recovery from checkerboard corners that have already been
// lifted into reconstruction coordinates.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "foodvol/error.hpp"
#include "foodvol/mesh.hpp"

namespace foodvol {

/// Row-major grid of inner checkerboard corners in model units.
struct CornerGrid {
  std::vector<Vec3> corners;
  std::size_t rows = 0;
  std::size_t cols = 0;
  /// Physical edge length of one square, in meters.
  double square_size_real = 0.0;

  const Vec3& at(std::size_t r, std::size_t c) const { return corners[r * cols + c]; }
};

struct ScaleEstimate {
  /// Meters per model unit.
  double s = 0.0;
  double median_distance = 0.0;
  std::size_t distance_count = 0;
  std::vector<double> distances;
};

inline void validate(const CornerGrid& grid) {
  if (grid.rows < 2 || grid.cols < 2) {
    throw Error(ErrorKind::kInvalidGrid, "grid needs at least 2 rows and 2 columns");
  }
  if (grid.corners.size() != grid.rows * grid.cols) {
    throw Error(ErrorKind::kInvalidGrid,
                "expected " + std::to_string(grid.rows * grid.cols) +
                    " corners, got " + std::to_string(grid.corners.size()));
  }
  if (!(std::isfinite(grid.square_size_real) && grid.square_size_real > 0.0)) {
    throw Error(ErrorKind::kInvalidGrid, "square_size_real must be positive");
  }
  for (const auto& c : grid.corners) {
    if (!c.allFinite()) throw Error(ErrorKind::kInvalidGrid, "non-finite corner");
  }
}

/// Distances between grid-neighbouring corners: every horizontal pair in
/// row-major order, then every vertical pair in column-major order.
inline std::vector<double> adjacent_corner_distances(const CornerGrid& grid) {
  validate(grid);
  std::vector<double> d;
  d.reserve(grid.rows * (grid.cols - 1) + grid.cols * (grid.rows - 1));
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c + 1 < grid.cols; ++c) {
      d.push_back((grid.at(r, c + 1) - grid.at(r, c)).norm());
    }
  }
  for (std::size_t c = 0; c < grid.cols; ++c) {
    for (std::size_t r = 0; r + 1 < grid.rows; ++r) {
      d.push_back((grid.at(r + 1, c) - grid.at(r, c)).norm());
    }
  }
  if (std::any_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) {
    throw Error(ErrorKind::kDegenerateGrid, "two adjacent corners coincide");
  }
  return d;
}

/// Median; an even-length list averages its two central elements.
inline double median(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::kEmptyInput, "median of empty list");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

/// s = square_size_real / median(distances).
inline ScaleEstimate scale_from_distances(std::vector<double> distances,
                                          double square_size_real) {
  ScaleEstimate est;
  est.median_distance = median(distances);
  if (!(est.median_distance > 0.0)) {
    throw Error(ErrorKind::kDegenerateGrid, "median corner distance is zero");
  }
  est.s = square_size_real / est.median_distance;
  est.distance_count = distances.size();
  est.distances = std::move(distances);
  return est;
}

inline ScaleEstimate estimate_scale(const CornerGrid& grid) {
  return scale_from_distances(adjacent_corner_distances(grid), grid.square_size_real);
}

// JSON: {"rows": R, "cols": C, "square_size_real_m": L, "corners": [[x,y,z], ...]}

inline CornerGrid corner_grid_from_json(const nlohmann::json& j) {
  CornerGrid grid;
  try {
    grid.rows = j.at("rows").get<std::size_t>();
    grid.cols = j.at("cols").get<std::size_t>();
    grid.square_size_real = j.at("square_size_real_m").get<double>();
    for (const auto& c : j.at("corners")) {
      if (!c.is_array() || c.size() != 3) {
        throw Error(ErrorKind::kParseError, "corner must be [x, y, z]");
      }
      grid.corners.emplace_back(c[0].get<double>(), c[1].get<double>(),
                                c[2].get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("corner grid: ") + e.what());
  }
  validate(grid);
  return grid;
}

inline nlohmann::json to_json(const CornerGrid& grid) {
  nlohmann::json corners = nlohmann::json::array();
  for (const auto& c : grid.corners) corners.push_back({c.x(), c.y(), c.z()});
  return {{"rows", grid.rows},
          {"cols", grid.cols},
          {"square_size_real_m", grid.square_size_real},
          {"corners", std::move(corners)}};
}

inline nlohmann::json to_json(const ScaleEstimate& est) {
  return {{"s", est.s},
          {"median_distance", est.median_distance},
          {"distance_count", est.distance_count},
          {"distances", est.distances}};
}

inline CornerGrid load_corner_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, path.string() + ": " + e.what());
  }
  return corner_grid_from_json(j);
}

}  // namespace foodvol
