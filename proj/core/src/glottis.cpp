#include "vta/glottis.hpp"

#include <cmath>

#include "vta/errors.hpp"

namespace vta::glottis {

namespace {

struct Derivs {
  double v1, a1, v2, a2;
};

// Quasi-steady flow through the two sections: entrance contraction (1.37),
// viscous channel resistances, Bernoulli acceleration at the 1->2 junction,
// jet separation into the tract with no recovery. The pressure balance is
// quadratic in U; the positive root is the flow.
double flow(double a1, double a2, double dp, const TwoMassParams& p) {
  if (a1 <= 0.0 || a2 <= 0.0 || dp <= 0.0) return 0.0;
  double r1v = 12.0 * p.mu * p.fold_length * p.fold_length * p.thickness1 / (a1 * a1 * a1);
  double r2v = 12.0 * p.mu * p.fold_length * p.fold_length * p.thickness2 / (a2 * a2 * a2);
  double qa = 0.5 * p.rho0 * (0.37 / (a1 * a1) + 1.0 / (a2 * a2));
  double qb = r1v + r2v;
  return (-qb + std::sqrt(qb * qb + 4.0 * qa * dp)) / (2.0 * qa);
}

Derivs derivatives(const GlottalState& s, double p_inlet, const TwoMassParams& p) {
  double a1 = section_area1(s, p);
  double a2 = section_area2(s, p);
  bool open = a1 > 0.0 && a2 > 0.0;
  double dp = p.p_sub - p_inlet;
  double u = open ? flow(a1, a2, dp, p) : 0.0;

  // Driving pressures at the section midpoints. A closed contact sees the
  // full upstream pressure on its subglottal side and none downstream.
  double p1, p2;
  if (open && u > 0.0) {
    double r1v = 12.0 * p.mu * p.fold_length * p.fold_length * p.thickness1 / (a1 * a1 * a1);
    double r2v = 12.0 * p.mu * p.fold_length * p.fold_length * p.thickness2 / (a2 * a2 * a2);
    double p11 = p.p_sub - 1.37 * 0.5 * p.rho0 * (u / a1) * (u / a1);
    double p12 = p11 - r1v * u;
    p1 = 0.5 * (p11 + p12);
    double p21 = p12 - 0.5 * p.rho0 * u * u * (1.0 / (a2 * a2) - 1.0 / (a1 * a1));
    double p22 = p21 - r2v * u;
    p2 = 0.5 * (p21 + p22);
  } else if (open) {
    p1 = 0.5 * (p.p_sub + p_inlet);  // open, no flow: static column
    p2 = p1;
  } else if (a1 <= 0.0) {
    p1 = p.p_sub;
    p2 = 0.0;
  } else {  // section 1 open, section 2 in contact
    p1 = p.p_sub;
    p2 = p.p_sub;
  }

  double f1 = p1 * p.fold_length * p.thickness1;
  double f2 = p2 * p.fold_length * p.thickness2;

  double contact1 = -p.rest_area1 / (2.0 * p.fold_length);
  double contact2 = -p.rest_area2 / (2.0 * p.fold_length);
  double spring1 = p.k1 * s.x1;
  double spring2 = p.k2 * s.x2;
  double zeta1 = p.zeta1, zeta2 = p.zeta2;
  if (a1 <= 0.0) {
    spring1 += p.collision_stiffness * p.k1 * (s.x1 - contact1);
    zeta1 += p.collision_zeta;
  }
  if (a2 <= 0.0) {
    spring2 += p.collision_stiffness * p.k2 * (s.x2 - contact2);
    zeta2 += p.collision_zeta;
  }
  double r1 = 2.0 * zeta1 * std::sqrt(p.m1 * p.k1);
  double r2 = 2.0 * zeta2 * std::sqrt(p.m2 * p.k2);

  Derivs d;
  d.v1 = s.v1;
  d.v2 = s.v2;
  d.a1 = (f1 - spring1 - r1 * s.v1 - p.kc * (s.x1 - s.x2)) / p.m1;
  d.a2 = (f2 - spring2 - r2 * s.v2 - p.kc * (s.x2 - s.x1)) / p.m2;
  return d;
}

}  // namespace

double section_area1(const GlottalState& s, const TwoMassParams& p) {
  return p.rest_area1 + 2.0 * p.fold_length * s.x1;
}

double section_area2(const GlottalState& s, const TwoMassParams& p) {
  return p.rest_area2 + 2.0 * p.fold_length * s.x2;
}

GlottalState step(const GlottalState& state, double p_tract_inlet,
                  const TwoMassParams& params, double dt) {
  if (!(dt > 0.0) || dt > 1.0 / 8000.0)
    throw ValidationError("glottis::step: dt must be in (0, 1/8000] s");
  double p_inlet = params.rho0 * params.c * params.c * p_tract_inlet;

  auto advance = [&](const GlottalState& s, const Derivs& d, double h) {
    GlottalState out = s;
    out.x1 = s.x1 + h * d.v1;
    out.v1 = s.v1 + h * d.a1;
    out.x2 = s.x2 + h * d.v2;
    out.v2 = s.v2 + h * d.a2;
    return out;
  };

  Derivs k1 = derivatives(state, p_inlet, params);
  Derivs k2 = derivatives(advance(state, k1, dt / 2), p_inlet, params);
  Derivs k3 = derivatives(advance(state, k2, dt / 2), p_inlet, params);
  Derivs k4 = derivatives(advance(state, k3, dt), p_inlet, params);

  GlottalState next = state;
  next.x1 += dt / 6.0 * (k1.v1 + 2 * k2.v1 + 2 * k3.v1 + k4.v1);
  next.v1 += dt / 6.0 * (k1.a1 + 2 * k2.a1 + 2 * k3.a1 + k4.a1);
  next.x2 += dt / 6.0 * (k1.v2 + 2 * k2.v2 + 2 * k3.v2 + k4.v2);
  next.v2 += dt / 6.0 * (k1.a2 + 2 * k2.a2 + 2 * k3.a2 + k4.a2);

  double a1 = section_area1(next, params);
  double a2 = section_area2(next, params);
  next.u_g = flow(a1, a2, params.p_sub - p_inlet, params);

  if (!std::isfinite(next.x1) || !std::isfinite(next.v1) || !std::isfinite(next.x2) ||
      !std::isfinite(next.v2) || !std::isfinite(next.u_g))
    throw SolverError("glottis::step: state became non-finite; reduce dt");
  return next;
}

}  // namespace vta::glottis
