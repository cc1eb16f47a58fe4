#pragma once

#include "vta/geometry.hpp"
#include "vta/resonance.hpp"

namespace vta::webster {

struct WebsterParams {
  double c = 350.0;   // sound speed, m/s
  double alpha = 0.0; // wall dissipation coefficient, shared with the 3D model
  // Glottal termination admittance relative to the characteristic (matched)
  // termination; 1 is a fully matched (anechoic) glottis plane, 0 a hard wall.
  double beta = 0.05;
  double shift_hz = 300.0;  // eigensolver shift, below the expected F1
  int min_elements = 200;
};

// Eigenanalysis of the 1D horn equation on [0, L]: Dirichlet at the lips,
// dissipative Robin at the glottis, P1 elements with A-weighted forms.
ResonanceSet webster_resonances(const geom::AreaFunction& af, const WebsterParams& params,
                                int k);

struct ScaleResult {
  double gamma;         // centerline length scale factor
  ResonanceSet scaled;  // resonances of the scaled geometry, labeled S_R
};

// Finds gamma in [0.5, 2] such that the mean relative difference between the
// three lowest Webster resonances of the length-scaled area function and the
// three lowest reference (Helmholtz) resonances vanishes.
ScaleResult scale_to_helmholtz(const geom::AreaFunction& af, const ResonanceSet& href,
                               const WebsterParams& params);

}  // namespace vta::webster
