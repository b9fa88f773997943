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

// Wavefront OBJ and ASCII PLY reading/writing. Only positions and faces are
// kept; polygons are fan-triangulated around their first corner.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "foodvol/error.hpp"
#include "foodvol/mesh.hpp"

namespace foodvol {

enum class MeshFormat { kAuto, kObj, kPlyAscii };

namespace io_detail {

inline Error parse_error(std::size_t line, const std::string& what) {
  return Error(ErrorKind::kParseError,
               "line " + std::to_string(line) + ": " + what);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc::result_out_of_range) {
    // from_chars reports overflow; treat it as a non-finite value.
    return std::numeric_limits<double>::infinity();
  }
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // from_chars rejects "inf"/"nan" spellings some writers emit.
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "nan" || lower == "-nan") {
      return std::numeric_limits<double>::quiet_NaN();
    }
    if (lower == "inf" || lower == "+inf" || lower == "infinity") {
      return std::numeric_limits<double>::infinity();
    }
    if (lower == "-inf" || lower == "-infinity") {
      return -std::numeric_limits<double>::infinity();
    }
    return std::nullopt;
  }
  return v;
}

inline std::optional<long long> to_int(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline Vec3 parse_position(std::span<const std::string_view> tok,
                           std::size_t line) {
  Vec3 p;
  for (int k = 0; k < 3; ++k) {
    auto v = to_double(tok[k]);
    if (!v) {
      throw parse_error(line, "malformed coordinate '" + std::string(tok[k]) + "'");
    }
    p[k] = *v;
  }
  if (!p.allFinite()) {
    throw Error(ErrorKind::kNonFiniteCoordinate,
                "line " + std::to_string(line) + ": non-finite vertex coordinate");
  }
  return p;
}

inline void add_polygon(TriangleMesh& mesh, const std::vector<long long>& idx,
                        std::size_t vertex_count, std::size_t line) {
  for (auto i : idx) {
    if (i < 0 || static_cast<std::size_t>(i) >= vertex_count) {
      throw Error(ErrorKind::kInvalidIndex,
                  "line " + std::to_string(line) + ": vertex index " +
                      std::to_string(i) + " out of range for " +
                      std::to_string(vertex_count) + " vertices");
    }
  }
  for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
    Face f{static_cast<std::uint32_t>(idx[0]), static_cast<std::uint32_t>(idx[k]),
           static_cast<std::uint32_t>(idx[k + 1])};
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      throw Error(ErrorKind::kDegenerateFace,
                  "line " + std::to_string(line) + ": face repeats a vertex index");
    }
    mesh.faces.push_back(f);
  }
}

inline std::string lowercase_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace io_detail

/// Parses an OBJ stream. Face indices are 1-based; negative indices count
/// back from the most recent vertex. `/vt/vn` suffixes are ignored.
inline TriangleMesh read_obj(std::istream& in) {
  TriangleMesh mesh;
  // Face indices may reference vertices declared later in the file, so
  // polygons are resolved after the whole stream has been read.
  struct PendingFace {
    std::vector<long long> idx;
    std::size_t line;
  };
  std::vector<PendingFace> pending;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view sv(raw);
    if (auto hash = sv.find('#'); hash != std::string_view::npos) {
      sv = sv.substr(0, hash);
    }
    auto tok = io_detail::split_ws(sv);
    if (tok.empty()) continue;
    if (tok[0] == "v") {
      if (tok.size() < 4) throw io_detail::parse_error(line, "vertex needs 3 coordinates");
      mesh.vertices.push_back(io_detail::parse_position(
          std::span<const std::string_view>(tok).subspan(1, 3), line));
    } else if (tok[0] == "f") {
      if (tok.size() < 4) throw io_detail::parse_error(line, "face needs at least 3 vertices");
      PendingFace pf{{}, line};
      for (std::size_t k = 1; k < tok.size(); ++k) {
        auto head = tok[k].substr(0, tok[k].find('/'));
        auto v = io_detail::to_int(head);
        if (!v || *v == 0) {
          throw io_detail::parse_error(line, "malformed face index '" +
                                                 std::string(tok[k]) + "'");
        }
        long long zero_based =
            *v > 0 ? *v - 1
                   : static_cast<long long>(mesh.vertices.size()) + *v;
        pf.idx.push_back(zero_based);
      }
      pending.push_back(std::move(pf));
    }
  }
  if (in.bad()) throw Error(ErrorKind::kIoFailure, "read failure");
  for (const auto& pf : pending) {
    io_detail::add_polygon(mesh, pf.idx, mesh.vertices.size(), pf.line);
  }
  return mesh;
}

/// Parses an ASCII 1.0 PLY stream. Elements other than `vertex` and `face`
/// are skipped; vertex properties other than x/y/z are ignored.
inline TriangleMesh read_ply(std::istream& in) {
  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> properties;
    std::vector<bool> is_list;
  };
  std::vector<Element> elements;
  std::string raw;
  std::size_t line = 0;

  if (!std::getline(in, raw) || io_detail::split_ws(raw) !=
                                    std::vector<std::string_view>{"ply"}) {
    throw io_detail::parse_error(1, "missing 'ply' magic");
  }
  line = 1;
  bool header_done = false;
  while (std::getline(in, raw)) {
    ++line;
    auto tok = io_detail::split_ws(raw);
    if (tok.empty()) continue;
    if (tok[0] == "format") {
      if (tok.size() < 3 || tok[1] != "ascii") {
        throw io_detail::parse_error(line, "only 'format ascii 1.0' is supported");
      }
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw io_detail::parse_error(line, "malformed element");
      auto n = io_detail::to_int(tok[2]);
      if (!n || *n < 0) throw io_detail::parse_error(line, "malformed element count");
      elements.push_back({std::string(tok[1]), static_cast<std::size_t>(*n), {}, {}});
    } else if (tok[0] == "property") {
      if (elements.empty()) throw io_detail::parse_error(line, "property before element");
      bool list = tok.size() >= 2 && tok[1] == "list";
      if ((list && tok.size() != 5) || (!list && tok.size() != 3)) {
        throw io_detail::parse_error(line, "malformed property");
      }
      elements.back().properties.emplace_back(tok.back());
      elements.back().is_list.push_back(list);
    } else if (tok[0] == "end_header") {
      header_done = true;
      break;
    }
    // comment / obj_info lines are ignored.
  }
  if (!header_done) throw io_detail::parse_error(line, "missing end_header");

  TriangleMesh mesh;
  std::vector<std::pair<std::vector<long long>, std::size_t>> polygons;
  auto next_data_line = [&](std::vector<std::string_view>& tok) {
    while (std::getline(in, raw)) {
      ++line;
      tok = io_detail::split_ws(raw);
      if (!tok.empty()) return;
    }
    throw io_detail::parse_error(line, "unexpected end of file");
  };

  std::vector<std::string_view> tok;
  for (const auto& el : elements) {
    if (el.name == "vertex") {
      int ix = -1, iy = -1, iz = -1;
      for (std::size_t p = 0; p < el.properties.size(); ++p) {
        if (el.is_list[p]) throw io_detail::parse_error(line, "list property on vertex");
        if (el.properties[p] == "x") ix = static_cast<int>(p);
        if (el.properties[p] == "y") iy = static_cast<int>(p);
        if (el.properties[p] == "z") iz = static_cast<int>(p);
      }
      if (ix < 0 || iy < 0 || iz < 0) {
        throw io_detail::parse_error(line, "vertex element lacks x/y/z");
      }
      mesh.vertices.reserve(el.count);
      for (std::size_t i = 0; i < el.count; ++i) {
        next_data_line(tok);
        if (tok.size() < el.properties.size()) {
          throw io_detail::parse_error(line, "too few vertex properties");
        }
        std::array<std::string_view, 3> xyz{tok[ix], tok[iy], tok[iz]};
        mesh.vertices.push_back(io_detail::parse_position(xyz, line));
      }
    } else if (el.name == "face") {
      if (el.properties.size() != 1 || !el.is_list[0] ||
          (el.properties[0] != "vertex_indices" &&
           el.properties[0] != "vertex_index")) {
        throw io_detail::parse_error(line, "face element must hold a single vertex_indices list");
      }
      for (std::size_t i = 0; i < el.count; ++i) {
        next_data_line(tok);
        auto n = io_detail::to_int(tok[0]);
        if (!n || *n < 3 || tok.size() != static_cast<std::size_t>(*n) + 1) {
          throw io_detail::parse_error(line, "malformed face list");
        }
        std::vector<long long> idx;
        for (long long k = 1; k <= *n; ++k) {
          auto v = io_detail::to_int(tok[k]);
          if (!v) throw io_detail::parse_error(line, "malformed face index");
          idx.push_back(*v);
        }
        polygons.emplace_back(std::move(idx), line);
      }
    } else {
      for (std::size_t i = 0; i < el.count; ++i) next_data_line(tok);
    }
  }
  for (const auto& [idx, at] : polygons) {
    io_detail::add_polygon(mesh, idx, mesh.vertices.size(), at);
  }
  return mesh;
}

inline void write_obj(const TriangleMesh& mesh, std::ostream& out) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& v : mesh.vertices) {
    out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  for (const auto& f : mesh.faces) {
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
}

inline void write_ply(const TriangleMesh& mesh, std::ostream& out) {
  out << "ply\nformat ascii 1.0\n"
      << "element vertex " << mesh.vertices.size() << '\n'
      << "property double x\nproperty double y\nproperty double z\n"
      << "element face " << mesh.faces.size() << '\n'
      << "property list uchar int vertex_indices\nend_header\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& v : mesh.vertices) {
    out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  for (const auto& f : mesh.faces) {
    out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  }
}

inline MeshFormat resolve_format(const std::filesystem::path& path,
                                 MeshFormat format) {
  if (format != MeshFormat::kAuto) return format;
  const auto ext = io_detail::lowercase_extension(path);
  if (ext == ".obj") return MeshFormat::kObj;
  if (ext == ".ply") return MeshFormat::kPlyAscii;
  throw Error(ErrorKind::kInvalidArgument,
              "cannot infer mesh format from '" + path.string() + "'");
}

/// Loads a mesh, enforcing every TriangleMesh invariant. File order of
/// vertices and faces is preserved.
inline TriangleMesh load_mesh(const std::filesystem::path& path,
                              MeshFormat format = MeshFormat::kAuto) {
  format = resolve_format(path, format);
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open '" + path.string() + "'");
  try {
    TriangleMesh mesh = format == MeshFormat::kObj ? read_obj(in) : read_ply(in);
    validate(mesh);
    return mesh;
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " +
                              std::string(e.what()).substr(to_string(e.kind()).size() + 2));
  }
}

inline void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path,
                      MeshFormat format = MeshFormat::kAuto) {
  format = resolve_format(path, format);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot write '" + path.string() + "'");
  if (format == MeshFormat::kObj) {
    write_obj(mesh, out);
  } else {
    write_ply(mesh, out);
  }
  out.flush();
  if (!out) throw Error(ErrorKind::kIoFailure, "write failed for '" + path.string() + "'");
}

}  // namespace foodvol
