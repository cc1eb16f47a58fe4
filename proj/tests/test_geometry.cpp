#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vta/errors.hpp"
#include "vta/geometry.hpp"

using namespace vta::geom;
using vta::ParseError;
using vta::ValidationError;

namespace {

constexpr double kPi = 3.14159265358979323846;

// 5-tet unit cube: central tet (1,2,4,7) plus four corner tets.
// x=1 faces tagged Gamma_1, everything else Gamma_2.
const char* kCubeMesh = R"(# unit cube, 5 tets
vertices 8
0 0 0
1 0 0
0 1 0
1 1 0
0 0 1
1 0 1
0 1 1
1 1 1
tets 5
1 2 4 7
0 1 2 4
1 2 3 7
1 4 5 7
2 4 6 7
boundary 12
0 1 2 2
1 2 3 2
4 5 7 2
4 6 7 2
0 2 4 2
2 4 6 2
1 3 7 1
1 5 7 1
0 1 4 2
1 4 5 2
2 3 7 2
2 6 7 2
)";

}  // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("two-row area file parses with defaults") {
  std::istringstream in("0 3e-4\n0.175 3e-4\n");
  auto af = parse_area_function(in);
  REQUIRE(af.samples.size() == 2);
  CHECK(af.length() == doctest::Approx(0.175));
  for (const auto& a : af.samples) {
    CHECK(a.area == doctest::Approx(3e-4));
    CHECK(a.circumference == doctest::Approx(2.0 * std::sqrt(kPi * 3e-4)));
    CHECK(a.sigma == 1.0);
  }
}

TEST_CASE("negative area fails validation") {
  std::istringstream in("0 3e-4\n0.1 -1e-4\n");
  CHECK_THROWS_AS(parse_area_function(in), ValidationError);
}

TEST_CASE("non-increasing arc length fails validation") {
  std::istringstream in("0 3e-4\n0.1 3e-4\n0.1 3e-4\n");
  CHECK_THROWS_AS(parse_area_function(in), ValidationError);
}

TEST_CASE("malformed row is a parse error") {
  std::istringstream in("0 3e-4\nnot-a-number 3e-4\n");
  CHECK_THROWS_AS(parse_area_function(in), ParseError);
}

TEST_CASE("area function round-trips bit-identically") {
  auto af = make_tube(TubeShape::kCosineHorn, 0.175, 3e-4, 20);
  std::stringstream buf;
  write_area_function(af, buf);
  auto back = parse_area_function(buf);
  CHECK(back == af);
}

TEST_CASE("make_tube shapes") {
  auto cyl = make_tube(TubeShape::kCylinder, 0.175, 3e-4, 20);
  CHECK(cyl.samples.size() == 21);
  for (const auto& a : cyl.samples) CHECK(a.area == 3e-4);

  auto horn = make_tube(TubeShape::kCosineHorn, 0.175, 3e-4, 4);
  CHECK(horn.samples[0].area == doctest::Approx(4.5e-4));  // cos(0) = 1

  CHECK_THROWS_AS(make_tube(TubeShape::kCylinder, 0.175, 3e-4, 1), ValidationError);
  CHECK_THROWS_AS(make_tube(TubeShape::kCylinder, -1.0, 3e-4, 4), ValidationError);
}

TEST_CASE("5-tet cube loads, has unit volume, and no glottis tag") {
  std::istringstream in(kCubeMesh);
  auto mesh = parse_mesh(in);
  CHECK(mesh.vertices.size() == 8);
  CHECK(mesh.tets.size() == 5);
  CHECK(mesh.volume() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mesh.tag_count(BoundaryTag::kMouth) == 2);
  CHECK(mesh.tag_count(BoundaryTag::kGlottis) == 0);
  CHECK(mesh.tag_area(BoundaryTag::kMouth) == doctest::Approx(1.0));
}

TEST_CASE("dangling boundary face is rejected") {
  std::string broken(kCubeMesh);
  auto pos = broken.find("0 1 2 2");
  broken.replace(pos, 7, "0 1 7 2");  // (0,1,7) is not a face of any tet
  std::istringstream in(broken);
  CHECK_THROWS_AS(parse_mesh(in), ValidationError);
}

TEST_CASE("untagged boundary face is rejected") {
  std::string broken(kCubeMesh);
  auto pos = broken.find("boundary 12\n0 1 2 2\n");
  broken.replace(pos, std::string("boundary 12\n0 1 2 2\n").size(), "boundary 11\n");
  std::istringstream in(broken);
  CHECK_THROWS_AS(parse_mesh(in), ValidationError);
}

TEST_CASE("unknown tag is a parse error") {
  std::string broken(kCubeMesh);
  auto pos = broken.find("0 1 2 2");
  broken.replace(pos, 7, "0 1 2 9");
  std::istringstream in(broken);
  CHECK_THROWS_AS(parse_mesh(in), ParseError);
}

TEST_CASE("negative-volume tets are repaired on load") {
  std::string swapped(kCubeMesh);
  auto pos = swapped.find("0 1 2 4");
  swapped.replace(pos, 7, "1 0 2 4");  // flipped orientation
  std::istringstream in(swapped);
  auto mesh = parse_mesh(in);
  CHECK(mesh.volume() == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& t : mesh.tets)
    CHECK(tet_volume(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]],
                     mesh.vertices[t[3]]) > 0.0);
}

TEST_CASE("mesh round-trips through the writer") {
  std::istringstream in(kCubeMesh);
  auto mesh = parse_mesh(in);
  std::stringstream buf;
  write_mesh(mesh, buf);
  auto back = parse_mesh(buf);
  CHECK(back == mesh);
}

TEST_CASE("cylinder mesh volume and tag areas match the analytic disk") {
  const double L = 0.175, r = 0.01, h = 0.005;
  auto mesh = make_cylinder_mesh(L, r, h);
  double disk = kPi * r * r;
  CHECK(std::abs(mesh.volume() - disk * L) / (disk * L) < 0.05);
  CHECK(std::abs(mesh.tag_area(BoundaryTag::kMouth) - disk) / disk < 0.05);
  CHECK(std::abs(mesh.tag_area(BoundaryTag::kGlottis) - disk) / disk < 0.05);
  CHECK(mesh.tag_count(BoundaryTag::kWall) > 0);

  // every incidence-1 face is tagged (validated on construction); spot-check
  // that the boundary covers the full surface area
  double lateral = 2.0 * kPi * r * L;
  CHECK(mesh.tag_area(BoundaryTag::kWall) == doctest::Approx(lateral).epsilon(0.05));
}

TEST_CASE("cylinder mesh rejects degenerate resolutions") {
  CHECK_THROWS_AS(make_cylinder_mesh(0.175, 0.01, 0.2), ValidationError);   // h > L
  CHECK_THROWS_AS(make_cylinder_mesh(0.175, 0.001, 0.05), ValidationError); // < 3 angular
}

TEST_SUITE_END();
