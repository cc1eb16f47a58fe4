#pragma once

namespace vta::glottis {

// Two-mass vocal-fold parameters, classic convention, SI units. These are
// configuration defaults, not values from a measurement; every experiment
// pins the set it uses.
struct TwoMassParams {
  double m1 = 1.25e-4;  // kg
  double m2 = 2.5e-5;   // kg
  double k1 = 80.0;     // N/m
  double k2 = 8.0;      // N/m
  double kc = 25.0;     // N/m, mass coupling
  double zeta1 = 0.1;   // damping ratios
  double zeta2 = 0.6;
  double rest_area1 = 5e-6;  // m^2
  double rest_area2 = 5e-6;  // m^2
  double fold_length = 0.014;  // m
  double thickness1 = 2.5e-3;  // m
  double thickness2 = 5e-4;    // m
  double p_sub = 800.0;        // Pa
  double collision_stiffness = 3.0;  // spring multiplier on closure
  double collision_zeta = 1.0;       // added damping ratio on closure
  double rho0 = 1.2;    // kg/m^3
  double mu = 1.86e-5;  // air viscosity, Pa s
  double c = 350.0;     // m/s, converts the tract's scaled pressure to Pa
};

struct GlottalState {
  double x1 = 0.0, v1 = 0.0;  // mass displacements (m) and velocities (m/s)
  double x2 = 0.0, v2 = 0.0;
  double u_g = 0.0;  // volume velocity of the last step, m^3/s (never negative)
};

// Glottal section areas opened by the two masses, clamped at closure.
double section_area1(const GlottalState& s, const TwoMassParams& p);
double section_area2(const GlottalState& s, const TwoMassParams& p);

// Advance the fold dynamics by dt with classic RK4 (4 stages), Bernoulli flow
// through the narrower section, and collision springs when a section closes.
// p_tract_inlet is the tract's scaled pressure p at the glottal end
// (physical pressure rho0 c^2 p). Requires 0 < dt <= 1/8000 s.
GlottalState step(const GlottalState& state, double p_tract_inlet,
                  const TwoMassParams& params, double dt);

}  // namespace vta::glottis
