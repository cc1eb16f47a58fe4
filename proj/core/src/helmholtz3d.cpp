#include "vta/helmholtz3d.hpp"

#include <algorithm>
#include <cmath>

#include "vta/errors.hpp"

namespace vta::helm3d {

namespace {

constexpr double kTwoPi = 6.283185307179586;

struct Grad {
  double g[4][3];  // constant P1 shape-function gradients
  double volume;
};

Grad tet_gradients(const geom::Vec3& p0, const geom::Vec3& p1, const geom::Vec3& p2,
                   const geom::Vec3& p3) {
  double a[3][3] = {{p1.x - p0.x, p2.x - p0.x, p3.x - p0.x},
                    {p1.y - p0.y, p2.y - p0.y, p3.y - p0.y},
                    {p1.z - p0.z, p2.z - p0.z, p3.z - p0.z}};
  double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  Grad g{};
  g.volume = det / 6.0;
  // rows of the inverse Jacobian are the gradients of the barycentric
  // coordinates lambda_1..lambda_3; lambda_0 closes the partition of unity
  double inv[3][3] = {
      {(a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det,
       (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det,
       (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det},
      {(a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det,
       (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det,
       (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det},
      {(a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det,
       (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det,
       (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det}};
  for (int i = 0; i < 3; ++i)
    for (int d = 0; d < 3; ++d) {
      g.g[i + 1][d] = inv[i][d];
      g.g[0][d] -= inv[i][d];
    }
  return g;
}

}  // namespace

Assembly assemble(const geom::TetMesh& mesh, const HelmholtzParams& params,
                  bool include_dirichlet) {
  const int nv = static_cast<int>(mesh.vertices.size());
  if (mesh.tag_count(geom::BoundaryTag::kMouth) == 0)
    throw SolverError("assemble: no Gamma_1 (mouth) boundary faces");
  if (mesh.tag_count(geom::BoundaryTag::kGlottis) == 0)
    throw SolverError("assemble: no Gamma_3 (glottis) boundary faces");

  Assembly out;
  out.free_index.assign(nv, 0);
  if (!include_dirichlet) {
    for (const auto& bt : mesh.boundary)
      if (bt.tag == geom::BoundaryTag::kMouth)
        for (int v : bt.v) out.free_index[v] = -1;
  }
  int n = 0;
  for (auto& fi : out.free_index)
    if (fi == 0) fi = n++;
  out.n_free = n;

  numlin::SparseBuilder M(n), C(n), K(n);
  const double c = params.c;

  for (size_t ti = 0; ti < mesh.tets.size(); ++ti) {
    const auto& t = mesh.tets[ti];
    auto g = tet_gradients(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]],
                           mesh.vertices[t[3]]);
    if (!(g.volume > 0.0))
      throw SolverError("assemble: zero-volume element " + std::to_string(ti));
    for (int i = 0; i < 4; ++i) {
      int fi = out.free_index[t[i]];
      if (fi < 0) continue;
      for (int j = 0; j < 4; ++j) {
        int fj = out.free_index[t[j]];
        if (fj < 0) continue;
        double dot = g.g[i][0] * g.g[j][0] + g.g[i][1] * g.g[j][1] + g.g[i][2] * g.g[j][2];
        K.add(fi, fj, c * c * dot * g.volume);
        M.add(fi, fj, g.volume * (i == j ? 0.1 : 0.05));
      }
    }
  }

  for (const auto& bt : mesh.boundary) {
    double w = 0.0;
    if (bt.tag == geom::BoundaryTag::kWall)
      w = c * params.alpha;
    else if (bt.tag == geom::BoundaryTag::kGlottis)
      w = c * params.beta;
    if (w == 0.0) continue;
    double area = geom::tri_area(mesh.vertices[bt.v[0]], mesh.vertices[bt.v[1]],
                                 mesh.vertices[bt.v[2]]);
    for (int i = 0; i < 3; ++i) {
      int fi = out.free_index[bt.v[i]];
      if (fi < 0) continue;
      for (int j = 0; j < 3; ++j) {
        int fj = out.free_index[bt.v[j]];
        if (fj < 0) continue;
        C.add(fi, fj, w * area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0));
      }
    }
  }

  out.M = M.build();
  out.C = C.build();
  out.K = K.build();
  return out;
}

ResonanceSet resonances(const geom::TetMesh& mesh, const HelmholtzParams& params, int k) {
  if (k < 1) throw ValidationError("resonances: k must be >= 1");
  auto sys = assemble(mesh, params);
  numlin::Complex shift(0.0, kTwoPi * params.shift_hz);

  int ask = std::min(2 * sys.n_free, 2 * k + 6);
  std::vector<Mode> modes;
  for (int round = 0; round < 2; ++round) {
    auto pairs = numlin::qep_solve(sys.M, sys.C, sys.K, ask, shift);
    modes = retain_acoustic_modes(pairs);
    if (static_cast<int>(modes.size()) >= k) break;
    ask = std::min(2 * sys.n_free, 2 * ask);
  }
  if (static_cast<int>(modes.size()) < k)
    throw SolverError("resonances: only " + std::to_string(modes.size()) +
                      " acoustic modes retained, " + std::to_string(k) + " requested");
  modes.resize(k);

  ResonanceSet rs;
  rs.method = Method::kHelmholtz;
  rs.modes = std::move(modes);
  rs.source = "tetmesh(" + std::to_string(mesh.tets.size()) + " tets, " +
              std::to_string(mesh.vertices.size()) + " vertices)";
  rs.c = params.c;
  rs.alpha = params.alpha;
  return rs;
}

numlin::CVector expand_eigenvector(const Assembly& assembly,
                                   std::span<const numlin::Complex> v) {
  numlin::CVector full(assembly.free_index.size(), 0.0);
  for (size_t i = 0; i < assembly.free_index.size(); ++i)
    if (assembly.free_index[i] >= 0) full[i] = v[assembly.free_index[i]];
  return full;
}

}  // namespace vta::helm3d
