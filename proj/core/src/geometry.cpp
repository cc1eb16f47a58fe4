#include "vta/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "vta/errors.hpp"

namespace vta::geom {

namespace {

constexpr double kPi = 3.14159265358979323846;

// strips `#` comments and surrounding whitespace; empty result means skip
std::string clean_line(const std::string& line) {
  auto hash = line.find('#');
  std::string s = (hash == std::string::npos) ? line : line.substr(0, hash);
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double default_circumference(double area) { return 2.0 * std::sqrt(kPi * area); }

}  // namespace

AreaSample AreaFunction::at(double s) const {
  const auto& v = samples;
  if (s <= v.front().s) return v.front();
  if (s >= v.back().s) return v.back();
  auto it = std::upper_bound(v.begin(), v.end(), s,
                             [](double x, const AreaSample& a) { return x < a.s; });
  const AreaSample& hi = *it;
  const AreaSample& lo = *(it - 1);
  double t = (s - lo.s) / (hi.s - lo.s);
  return AreaSample{s, lo.area + t * (hi.area - lo.area),
                    lo.circumference + t * (hi.circumference - lo.circumference),
                    lo.sigma + t * (hi.sigma - lo.sigma)};
}

void AreaFunction::validate() const {
  if (samples.size() < 2) throw ValidationError("area function needs at least 2 samples");
  if (samples.front().s != 0.0)
    throw ValidationError("area function must start at s = 0");
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& a = samples[i];
    if (!(a.area > 0.0))
      throw ValidationError("non-positive area at sample " + std::to_string(i));
    if (!(a.circumference > 0.0))
      throw ValidationError("non-positive circumference at sample " + std::to_string(i));
    if (!(a.sigma > 0.0))
      throw ValidationError("non-positive sigma at sample " + std::to_string(i));
    if (i > 0 && !(a.s > samples[i - 1].s))
      throw ValidationError("arc length not strictly increasing at sample " +
                            std::to_string(i));
  }
  if (!(samples.back().s > 0.0)) throw ValidationError("total length must be positive");
}

AreaFunction make_tube(TubeShape shape, double length, double base_area, int n_segments) {
  if (!(length > 0.0) || !(base_area > 0.0))
    throw ValidationError("make_tube: length and base area must be positive");
  if (n_segments < 2) throw ValidationError("make_tube: need at least 2 segments");
  AreaFunction af;
  af.samples.reserve(n_segments + 1);
  for (int i = 0; i <= n_segments; ++i) {
    double s = length * i / n_segments;
    double a = base_area;
    if (shape == TubeShape::kCosineHorn)
      a = base_area * (1.0 + 0.5 * std::cos(2.0 * kPi * s / length));
    af.samples.push_back({s, a, default_circumference(a), 1.0});
  }
  af.validate();
  return af;
}

AreaFunction parse_area_function(std::istream& in) {
  AreaFunction af;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = clean_line(line);
    if (s.empty()) continue;
    std::istringstream row(s);
    AreaSample a{};
    if (!(row >> a.s >> a.area))
      throw ParseError("area file line " + std::to_string(lineno) + ": expected `s A [W [Sigma]]`");
    if (!(row >> a.circumference)) {
      a.circumference = default_circumference(a.area);
      a.sigma = 1.0;
    } else if (!(row >> a.sigma)) {
      a.sigma = 1.0;
    }
    std::string rest;
    if (row >> rest)
      throw ParseError("area file line " + std::to_string(lineno) + ": trailing fields");
    af.samples.push_back(a);
  }
  af.validate();
  return af;
}

void write_area_function(const AreaFunction& af, std::ostream& out) {
  out << "# s A W Sigma\n";
  char buf[160];
  for (const auto& a : af.samples) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", a.s, a.area,
                  a.circumference, a.sigma);
    out << buf;
  }
}

AreaFunction load_area_function(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open area file: " + path.string());
  try {
    return parse_area_function(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_area_function(const AreaFunction& af, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write area file: " + path.string());
  write_area_function(af, out);
}

// ---------------------------------------------------------------------------

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  double m[3][3] = {{b.x - a.x, b.y - a.y, b.z - a.z},
                    {c.x - a.x, c.y - a.y, c.z - a.z},
                    {d.x - a.x, d.y - a.y, d.z - a.z}};
  double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return det / 6.0;
}

double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  double ux = b.x - a.x, uy = b.y - a.y, uz = b.z - a.z;
  double vx = c.x - a.x, vy = c.y - a.y, vz = c.z - a.z;
  double cx = uy * vz - uz * vy, cy = uz * vx - ux * vz, cz = ux * vy - uy * vx;
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

double TetMesh::volume() const {
  double v = 0.0;
  for (const auto& t : tets)
    v += tet_volume(vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]);
  return v;
}

double TetMesh::tag_area(BoundaryTag tag) const {
  double a = 0.0;
  for (const auto& bt : boundary)
    if (bt.tag == tag) a += tri_area(vertices[bt.v[0]], vertices[bt.v[1]], vertices[bt.v[2]]);
  return a;
}

int TetMesh::tag_count(BoundaryTag tag) const {
  int n = 0;
  for (const auto& bt : boundary)
    if (bt.tag == tag) ++n;
  return n;
}

void TetMesh::repair_orientation_and_validate() {
  const int nv = static_cast<int>(vertices.size());
  for (size_t ti = 0; ti < tets.size(); ++ti) {
    auto& t = tets[ti];
    for (int j : t)
      if (j < 0 || j >= nv)
        throw ValidationError("tet " + std::to_string(ti) + ": vertex index out of range");
    double v = tet_volume(vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]);
    if (v < 0.0) {
      std::swap(t[1], t[2]);
      v = -v;
    }
    if (!(v > 0.0))
      throw ValidationError("tet " + std::to_string(ti) + " has zero volume");
  }

  // face incidence over sorted vertex triples
  std::map<std::array<int, 3>, int> incidence;
  auto key = [](int a, int b, int c) {
    std::array<int, 3> k{a, b, c};
    std::sort(k.begin(), k.end());
    return k;
  };
  for (const auto& t : tets) {
    incidence[key(t[0], t[1], t[2])]++;
    incidence[key(t[0], t[1], t[3])]++;
    incidence[key(t[0], t[2], t[3])]++;
    incidence[key(t[1], t[2], t[3])]++;
  }
  for (const auto& [f, n] : incidence)
    if (n > 2)
      throw ValidationError("face shared by " + std::to_string(n) + " tets");

  std::map<std::array<int, 3>, int> tagged;  // boundary face -> times listed
  for (const auto& bt : boundary) {
    for (int j : bt.v)
      if (j < 0 || j >= nv) throw ValidationError("boundary face vertex index out of range");
    auto k = key(bt.v[0], bt.v[1], bt.v[2]);
    auto it = incidence.find(k);
    if (it == incidence.end())
      throw ValidationError("boundary face is not a face of any tet (dangling face)");
    if (it->second != 1)
      throw ValidationError("boundary face is interior (shared by two tets)");
    if (++tagged[k] > 1) throw ValidationError("boundary face listed twice");
  }
  for (const auto& [f, n] : incidence)
    if (n == 1 && !tagged.count(f))
      throw ValidationError("untagged boundary face (" + std::to_string(f[0]) + " " +
                            std::to_string(f[1]) + " " + std::to_string(f[2]) + ")");
}

TetMesh make_cylinder_mesh(double length, double radius, double target_h) {
  if (!(length > 0.0) || !(radius > 0.0) || !(target_h > 0.0))
    throw ValidationError("make_cylinder_mesh: dimensions must be positive");
  if (target_h > length)
    throw ValidationError("make_cylinder_mesh: target_h exceeds the cylinder length");
  int n_theta = static_cast<int>(std::ceil(2.0 * kPi * radius / target_h));
  if (n_theta < 3)
    throw ValidationError("make_cylinder_mesh: fewer than 3 angular subdivisions");
  int n_r = std::max(1, static_cast<int>(std::lround(radius / target_h)));
  int n_z = std::max(1, static_cast<int>(std::lround(length / target_h)));

  TetMesh mesh;
  const int per_layer = 1 + n_r * n_theta;
  auto vid = [&](int layer, int ring, int m) {
    // ring 0 is the axis vertex
    if (ring == 0) return layer * per_layer;
    return layer * per_layer + 1 + (ring - 1) * n_theta + (m % n_theta);
  };
  for (int l = 0; l <= n_z; ++l) {
    double z = length * l / n_z;
    mesh.vertices.push_back({0.0, 0.0, z});
    for (int ring = 1; ring <= n_r; ++ring) {
      double rho = radius * ring / n_r;
      for (int m = 0; m < n_theta; ++m) {
        double th = 2.0 * kPi * m / n_theta;
        mesh.vertices.push_back({rho * std::cos(th), rho * std::sin(th), z});
      }
    }
  }

  // each disk triangle extrudes to a prism; sorting the bottom indices makes
  // every quad diagonal pass through its smallest vertex, so neighboring
  // prisms split conformally
  auto add_prism = [&](int a, int b, int c) {
    std::array<int, 3> bot{a, b, c};
    std::sort(bot.begin(), bot.end());
    int a0 = bot[0], a1 = bot[1], a2 = bot[2];
    int t0 = a0 + per_layer, t1 = a1 + per_layer, t2 = a2 + per_layer;
    mesh.tets.push_back({a0, a1, a2, t2});
    mesh.tets.push_back({a0, a1, t2, t1});
    mesh.tets.push_back({a0, t1, t2, t0});
  };
  for (int l = 0; l < n_z; ++l) {
    for (int m = 0; m < n_theta; ++m)
      add_prism(vid(l, 0, 0), vid(l, 1, m), vid(l, 1, m + 1));
    for (int ring = 1; ring < n_r; ++ring)
      for (int m = 0; m < n_theta; ++m) {
        int p00 = vid(l, ring, m), p01 = vid(l, ring, m + 1);
        int p10 = vid(l, ring + 1, m), p11 = vid(l, ring + 1, m + 1);
        add_prism(p00, p10, p11);
        add_prism(p00, p11, p01);
      }
  }

  // boundary = incidence-1 faces, tagged by position: glottis plane at z=0,
  // mouth at z=L, lateral wall otherwise
  std::map<std::array<int, 3>, int> incidence;
  auto skey = [](int a, int b, int c) {
    std::array<int, 3> k{a, b, c};
    std::sort(k.begin(), k.end());
    return k;
  };
  for (const auto& t : mesh.tets) {
    incidence[skey(t[0], t[1], t[2])]++;
    incidence[skey(t[0], t[1], t[3])]++;
    incidence[skey(t[0], t[2], t[3])]++;
    incidence[skey(t[1], t[2], t[3])]++;
  }
  const double eps = 1e-9 * length;
  for (const auto& [f, n] : incidence) {
    if (n != 1) continue;
    double z0 = mesh.vertices[f[0]].z, z1 = mesh.vertices[f[1]].z, z2 = mesh.vertices[f[2]].z;
    BoundaryTag tag = BoundaryTag::kWall;
    if (std::abs(z0) < eps && std::abs(z1) < eps && std::abs(z2) < eps)
      tag = BoundaryTag::kGlottis;
    else if (std::abs(z0 - length) < eps && std::abs(z1 - length) < eps &&
             std::abs(z2 - length) < eps)
      tag = BoundaryTag::kMouth;
    mesh.boundary.push_back({f, tag});
  }

  mesh.repair_orientation_and_validate();
  return mesh;
}

TetMesh parse_mesh(std::istream& in) {
  TetMesh mesh;
  std::string line;
  int lineno = 0;
  enum class Section { kNone, kVertices, kTets, kBoundary } section = Section::kNone;
  long remaining = 0;

  auto fail = [&](const std::string& msg) {
    throw ParseError("mesh file line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string s = clean_line(line);
    if (s.empty()) continue;
    std::istringstream row(s);
    if (remaining == 0) {
      std::string word;
      long count = 0;
      row >> word;
      if (!(row >> count) || count < 0) fail("expected `" + word + " <count>`");
      if (word == "vertices") {
        section = Section::kVertices;
        mesh.vertices.reserve(count);
      } else if (word == "tets") {
        section = Section::kTets;
        mesh.tets.reserve(count);
      } else if (word == "boundary") {
        section = Section::kBoundary;
        mesh.boundary.reserve(count);
      } else {
        fail("unknown section `" + word + "`");
      }
      remaining = count;
      continue;
    }
    switch (section) {
      case Section::kVertices: {
        Vec3 v;
        if (!(row >> v.x >> v.y >> v.z)) fail("expected `x y z`");
        mesh.vertices.push_back(v);
        break;
      }
      case Section::kTets: {
        std::array<int, 4> t;
        if (!(row >> t[0] >> t[1] >> t[2] >> t[3])) fail("expected 4 vertex indices");
        mesh.tets.push_back(t);
        break;
      }
      case Section::kBoundary: {
        std::array<int, 3> f;
        int tag;
        if (!(row >> f[0] >> f[1] >> f[2] >> tag)) fail("expected `i j k TAG`");
        if (tag < 1 || tag > 3) fail("unknown boundary tag " + std::to_string(tag));
        mesh.boundary.push_back({f, static_cast<BoundaryTag>(tag)});
        break;
      }
      case Section::kNone:
        fail("data before any section header");
    }
    --remaining;
  }
  if (remaining != 0) throw ParseError("mesh file: truncated section");
  mesh.repair_orientation_and_validate();
  return mesh;
}

void write_mesh(const TetMesh& mesh, std::ostream& out) {
  char buf[200];
  out << "vertices " << mesh.vertices.size() << "\n";
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x, v.y, v.z);
    out << buf;
  }
  out << "tets " << mesh.tets.size() << "\n";
  for (const auto& t : mesh.tets)
    out << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
  out << "boundary " << mesh.boundary.size() << "\n";
  for (const auto& b : mesh.boundary)
    out << b.v[0] << " " << b.v[1] << " " << b.v[2] << " " << static_cast<int>(b.tag)
        << "\n";
}

TetMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file: " + path.string());
  try {
    return parse_mesh(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_mesh(const TetMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write mesh file: " + path.string());
  write_mesh(mesh, out);
}

}  // namespace vta::geom
