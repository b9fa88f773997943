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

#include <fstream>
#include <functional>
#include <sstream>

#include <gtest/gtest.h>

#include "foodvol/fixtures.hpp"
#include "foodvol/mesh_io.hpp"
#include "test_util.hpp"

namespace {

using namespace foodvol;
using foodvol::testing::ScratchDir;

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::kInvalidArgument;
}

TEST(MeshIo, MinimalObj) {
  ScratchDir dir("io");
  write_text(dir / "tri.obj", "# one triangle\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  const auto mesh = load_mesh(dir / "tri.obj");
  EXPECT_EQ(mesh.vertex_count(), 3u);
  EXPECT_EQ(mesh.face_count(), 1u);
  EXPECT_EQ(mesh.faces[0], (Face{0, 1, 2}));
}

TEST(MeshIo, ObjIndexOutOfRange) {
  ScratchDir dir("io");
  write_text(dir / "bad.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n");
  EXPECT_EQ(kind_of([&] { load_mesh(dir / "bad.obj"); }), ErrorKind::kInvalidIndex);
}

TEST(MeshIo, ObjSlashSuffixesAndNegativeIndices) {
  std::istringstream in(
      "v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvn 0 0 1\n"
      "f 1/1/1 2/1/1 3/1/1\nf -3//1 -2//1 -1//1\n");
  const auto mesh = read_obj(in);
  ASSERT_EQ(mesh.face_count(), 2u);
  EXPECT_EQ(mesh.faces[0], mesh.faces[1]);
}

TEST(MeshIo, ObjPolygonIsFanTriangulated) {
  std::istringstream in("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nv -1 1 0\nf 1 2 3 4 5\n");
  const auto mesh = read_obj(in);
  ASSERT_EQ(mesh.face_count(), 3u);
  EXPECT_EQ(mesh.faces[0], (Face{0, 1, 2}));
  EXPECT_EQ(mesh.faces[1], (Face{0, 2, 3}));
  EXPECT_EQ(mesh.faces[2], (Face{0, 3, 4}));
}

TEST(MeshIo, ObjParseErrorCarriesLineNumber) {
  ScratchDir dir("io");
  write_text(dir / "bad.obj", "v 0 0 0\nv 1 zero 0\n");
  try {
    load_mesh(dir / "bad.obj");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(MeshIo, NonFiniteCoordinateRejected) {
  ScratchDir dir("io");
  write_text(dir / "nan.obj", "v 0 0 0\nv nan 0 0\nv 0 1 0\nf 1 2 3\n");
  EXPECT_EQ(kind_of([&] { load_mesh(dir / "nan.obj"); }), ErrorKind::kNonFiniteCoordinate);
  write_text(dir / "inf.ply",
             "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\n"
             "property float z\nend_header\n1e999 0 0\n");
  EXPECT_EQ(kind_of([&] { load_mesh(dir / "inf.ply"); }), ErrorKind::kNonFiniteCoordinate);
}

TEST(MeshIo, DegenerateFaceRejected) {
  std::istringstream in("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 2\n");
  EXPECT_EQ(kind_of([&] { read_obj(in); }), ErrorKind::kDegenerateFace);
}

TEST(MeshIo, MissingFileIsIoFailure) {
  EXPECT_EQ(kind_of([] { load_mesh("/nonexistent/mesh.obj"); }), ErrorKind::kIoFailure);
}

TEST(MeshIo, PlyWithExtraPropertiesAndElements) {
  std::istringstream in(
      "ply\nformat ascii 1.0\ncomment made by hand\n"
      "element vertex 4\nproperty float nx\nproperty float x\nproperty float y\n"
      "property float z\nproperty uchar red\n"
      "element face 1\nproperty list uchar int vertex_indices\n"
      "element edge 1\nproperty int vertex1\nproperty int vertex2\n"
      "end_header\n"
      "9 0 0 0 255\n9 1 0 0 255\n9 1 1 0 255\n9 0 1 0 255\n"
      "4 0 1 2 3\n"
      "0 1\n");
  const auto mesh = read_ply(in);
  ASSERT_EQ(mesh.vertex_count(), 4u);
  EXPECT_EQ(mesh.vertices[2], Vec3(1, 1, 0));
  ASSERT_EQ(mesh.face_count(), 2u);
  EXPECT_EQ(mesh.faces[1], (Face{0, 2, 3}));
}

TEST(MeshIo, BinaryPlyRejected) {
  std::istringstream in("ply\nformat binary_little_endian 1.0\nend_header\n");
  EXPECT_EQ(kind_of([&] { read_ply(in); }), ErrorKind::kParseError);
}

TEST(MeshIo, EmptyMeshRoundTrips) {
  ScratchDir dir("io");
  for (const char* name : {"empty.obj", "empty.ply"}) {
    save_mesh(TriangleMesh{}, dir / name);
    EXPECT_TRUE(load_mesh(dir / name).empty()) << name;
  }
}

TEST(MeshIo, UnitCubeRoundTripIsExact) {
  ScratchDir dir("io");
  const auto cube = make_box(1, 1, 1);
  for (const char* name : {"cube.obj", "cube.ply"}) {
    save_mesh(cube, dir / name);
    EXPECT_EQ(load_mesh(dir / name), cube) << name;
  }
  // Saving the reloaded mesh reproduces the file byte for byte.
  save_mesh(load_mesh(dir / "cube.obj"), dir / "again.obj");
  std::ifstream a(dir / "cube.obj"), b(dir / "again.obj");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(MeshIo, SphereRoundTripWithinTolerance) {
  ScratchDir dir("io");
  // 5 subdivisions: 20480 triangles with irrational coordinates.
  const auto sphere = make_icosphere(0.37, 5);
  for (const char* name : {"sphere.obj", "sphere.ply"}) {
    save_mesh(sphere, dir / name);
    const auto back = load_mesh(dir / name);
    ASSERT_EQ(back.faces, sphere.faces);
    ASSERT_EQ(back.vertex_count(), sphere.vertex_count());
    double worst = 0.0;
    for (std::size_t i = 0; i < back.vertex_count(); ++i) {
      worst = std::max(worst, (back.vertices[i] - sphere.vertices[i]).cwiseAbs().maxCoeff());
    }
    EXPECT_LE(worst, 1e-9) << name;
  }
}

// Property: random valid meshes survive save/load in both formats.
TEST(MeshIo, RandomMeshRoundTripProperty) {
  ScratchDir dir("io");
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 25; ++trial) {
    TriangleMesh m;
    const auto nv = 3 + gen() % 40;
    for (auto p : foodvol::testing::random_points(nv, gen(), 1e3)) m.vertices.push_back(p);
    const auto nf = gen() % 60;
    for (std::size_t f = 0; f < nf; ++f) {
      std::uint32_t a = gen() % nv, b = gen() % nv, c = gen() % nv;
      if (a == b || b == c || a == c) continue;
      m.faces.push_back({a, b, c});
    }
    for (const char* name : {"r.obj", "r.ply"}) {
      save_mesh(m, dir / name);
      EXPECT_EQ(load_mesh(dir / name), m) << "trial " << trial << " " << name;
    }
  }
}

TEST(MeshIo, UnknownExtensionNeedsExplicitFormat) {
  ScratchDir dir("io");
  write_text(dir / "tri.txt", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  EXPECT_EQ(kind_of([&] { load_mesh(dir / "tri.txt"); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(load_mesh(dir / "tri.txt", MeshFormat::kObj).face_count(), 1u);
}

}  // namespace
