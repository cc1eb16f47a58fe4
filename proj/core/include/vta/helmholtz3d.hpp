#pragma once

#include <span>

#include "vta/geometry.hpp"
#include "vta/resonance.hpp"

namespace vta::helm3d {

struct HelmholtzParams {
  double c = 350.0;
  double alpha = 0.0;  // dimensionless wall admittance on Gamma_2; 0 = hard walls
  // Glottal-plane admittance on Gamma_3 relative to the characteristic
  // (matched) termination; 1 is fully matched, 0 the energy-conserving limit.
  double beta = 0.05;
  double shift_hz = 300.0;
};

struct Assembly {
  numlin::SparseMatrix M, C, K;
  std::vector<int> free_index;  // vertex -> free unknown index, -1 on Gamma_1
  int n_free = 0;
};

// Galerkin P1 matrices of the quadratic pencil lambda^2 M + lambda C + K:
//   M = integral(Phi Psi),  K = c^2 integral(grad Phi . grad Psi),
//   C = c alpha surf_Gamma2(Phi Psi) + beta c surf_Gamma3(Phi Psi).
// Dirichlet rows/columns on Gamma_1 are eliminated unless include_dirichlet.
Assembly assemble(const geom::TetMesh& mesh, const HelmholtzParams& params,
                  bool include_dirichlet = false);

ResonanceSet resonances(const geom::TetMesh& mesh, const HelmholtzParams& params, int k);

// Full-length eigenfunction with zeros on the eliminated Gamma_1 vertices.
numlin::CVector expand_eigenvector(const Assembly& assembly,
                                   std::span<const numlin::Complex> v);

}  // namespace vta::helm3d
