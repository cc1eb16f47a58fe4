#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace vta::geom {

// ---------------------------------------------------------------------------
// 1D tract description

struct AreaSample {
  double s;              // arc length from the glottis, m
  double area;           // cross-sectional area, m^2
  double circumference;  // m
  double sigma;          // sound-speed correction factor, dimensionless

  bool operator==(const AreaSample&) const = default;
};

struct AreaFunction {
  std::vector<AreaSample> samples;  // s strictly increasing, s[0] = 0

  double length() const { return samples.back().s; }
  AreaSample at(double s) const;  // linear interpolation, clamped to [0, L]
  void validate() const;          // throws ValidationError

  bool operator==(const AreaFunction&) const = default;
};

enum class TubeShape { kCylinder, kCosineHorn };

AreaFunction make_tube(TubeShape shape, double length, double base_area, int n_segments);

AreaFunction parse_area_function(std::istream& in);
void write_area_function(const AreaFunction& af, std::ostream& out);
AreaFunction load_area_function(const std::filesystem::path& path);
void save_area_function(const AreaFunction& af, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// 3D tagged tetrahedral mesh

struct Vec3 {
  double x = 0, y = 0, z = 0;
  bool operator==(const Vec3&) const = default;
};

// Gamma_1 = mouth opening (Dirichlet), Gamma_2 = air-tissue walls,
// Gamma_3 = virtual plane above the glottis.
enum class BoundaryTag : int { kMouth = 1, kWall = 2, kGlottis = 3 };

struct BoundaryTri {
  std::array<int, 3> v;
  BoundaryTag tag;
  bool operator==(const BoundaryTri&) const = default;
};

struct TetMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<BoundaryTri> boundary;

  double volume() const;                 // sum of signed tet volumes
  double tag_area(BoundaryTag t) const;  // total area of triangles tagged t
  int tag_count(BoundaryTag t) const;

  // Reorders negative-volume tets, then checks: index ranges, nonzero
  // volumes, the 1-or-2 face incidence rule, and that the tagged boundary
  // is exactly the set of incidence-1 faces. Throws ValidationError.
  void repair_orientation_and_validate();

  bool operator==(const TetMesh&) const = default;
};

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);
double tri_area(const Vec3& a, const Vec3& b, const Vec3& c);

TetMesh make_cylinder_mesh(double length, double radius, double target_h);

TetMesh parse_mesh(std::istream& in);
void write_mesh(const TetMesh& mesh, std::ostream& out);
TetMesh load_mesh(const std::filesystem::path& path);
void save_mesh(const TetMesh& mesh, const std::filesystem::path& path);

}  // namespace vta::geom
