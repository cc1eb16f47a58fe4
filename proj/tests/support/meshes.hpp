#pragma once

// Structured test meshes that the library itself does not need to ship.

#include "vta/geometry.hpp"

namespace testmesh {

// Axis-aligned box [0,lx]x[0,ly]x[0,lz], Kuhn 6-tet split per cube.
// Gamma_1 (mouth, Dirichlet) at x = lx, Gamma_3 (glottis) at x = 0,
// Gamma_2 elsewhere.
vta::geom::TetMesh box_duct(double lx, double ly, double lz, double target_h);

}  // namespace testmesh
