#include "vta/webster1d.hpp"

#include <algorithm>
#include <cmath>

#include "vta/errors.hpp"

namespace vta {

std::vector<Mode> retain_acoustic_modes(const std::vector<numlin::EigenPair>& pairs,
                                        double min_hz) {
  constexpr double kTwoPi = 6.283185307179586;
  std::vector<Mode> modes;
  for (const auto& p : pairs) {
    double f = p.lambda.imag() / kTwoPi;
    if (f > min_hz) modes.push_back({p.lambda, f});
  }
  std::sort(modes.begin(), modes.end(),
            [](const Mode& a, const Mode& b) { return a.frequency < b.frequency; });
  return modes;
}

}  // namespace vta

namespace vta::webster {

namespace {

constexpr double kTwoPi = 6.283185307179586;

struct Assembled {
  numlin::SparseMatrix M, C, K;
  int n;  // free unknowns (lip node eliminated)
};

// Weak form of the 1D problem, multiplied through by c^2:
//   lambda^2 * (A/Sigma^2) + lambda * (alpha c W  +  beta c A(0)/Sigma(0) at s=0)
//   + c^2 * (A phi' psi')
// Dirichlet phi = 0 at s = L. Sigma acts as a local sound-speed correction in
// both the mass term and the glottal Robin coefficient. alpha is the
// dimensionless wall admittance ratio; the damping weight c*alpha*W is the 1D
// reduction of the 3D wall term (wall surface per unit length = W).
Assembled assemble(const geom::AreaFunction& af, const WebsterParams& params,
                   int n_elements) {
  const double L = af.length();
  const double h = L / n_elements;
  const int n = n_elements;  // free nodes 0 .. n-1
  numlin::SparseBuilder M(n), C(n), K(n);

  auto add = [n](numlin::SparseBuilder& B, int i, int j, double v) {
    if (i < n && j < n) B.add(i, j, v);
  };

  const double c = params.c;
  for (int e = 0; e < n_elements; ++e) {
    auto mid = af.at((e + 0.5) * h);
    double km = c * c * mid.area / h;
    double mm = (mid.area / (mid.sigma * mid.sigma)) * h / 6.0;
    double cm = params.alpha * c * mid.circumference * h / 6.0;
    int i = e, j = e + 1;
    add(K, i, i, km);
    add(K, j, j, km);
    add(K, i, j, -km);
    add(K, j, i, -km);
    add(M, i, i, 2 * mm);
    add(M, j, j, 2 * mm);
    add(M, i, j, mm);
    add(M, j, i, mm);
    add(C, i, i, 2 * cm);
    add(C, j, j, 2 * cm);
    add(C, i, j, cm);
    add(C, j, i, cm);
  }
  const auto& glottis = af.samples.front();
  add(C, 0, 0, params.beta * c * glottis.area / glottis.sigma);

  return {M.build(), C.build(), K.build(), n};
}

int element_count(const geom::AreaFunction& af, const WebsterParams& params) {
  return std::max<int>(params.min_elements,
                       2 * (static_cast<int>(af.samples.size()) - 1));
}

}  // namespace

ResonanceSet webster_resonances(const geom::AreaFunction& af, const WebsterParams& params,
                                int k) {
  af.validate();
  if (k < 1) throw ValidationError("webster_resonances: k must be >= 1");

  auto sys = assemble(af, params, element_count(af, params));
  numlin::Complex shift(0.0, kTwoPi * params.shift_hz);

  int ask = std::min(2 * sys.n, 2 * k + 6);
  std::vector<Mode> modes;
  for (int round = 0; round < 2; ++round) {
    auto pairs = numlin::qep_solve(sys.M, sys.C, sys.K, ask, shift);
    modes = retain_acoustic_modes(pairs);
    if (static_cast<int>(modes.size()) >= k) break;
    ask = std::min(2 * sys.n, 2 * ask);
  }
  if (static_cast<int>(modes.size()) < k)
    throw SolverError("webster_resonances: only " + std::to_string(modes.size()) +
                      " acoustic modes retained, " + std::to_string(k) + " requested");
  modes.resize(k);

  ResonanceSet rs;
  rs.method = Method::kWebster;
  rs.modes = std::move(modes);
  rs.source = "area(" + std::to_string(af.samples.size()) + " samples, L=" +
              std::to_string(af.length()) + " m)";
  rs.c = params.c;
  rs.alpha = params.alpha;
  return rs;
}

namespace {

geom::AreaFunction scale_length(const geom::AreaFunction& af, double gamma) {
  geom::AreaFunction out = af;
  for (auto& s : out.samples) s.s *= gamma;
  return out;
}

}  // namespace

ScaleResult scale_to_helmholtz(const geom::AreaFunction& af, const ResonanceSet& href,
                               const WebsterParams& params) {
  af.validate();
  if (href.modes.size() < 3)
    throw ValidationError("scale_to_helmholtz: fewer than 3 reference modes");

  const int n_modes = 3;
  auto objective = [&](double gamma) {
    auto rs = webster_resonances(scale_length(af, gamma), params, n_modes);
    double mean = 0.0;
    for (int i = 0; i < n_modes; ++i)
      mean += (rs.modes[i].frequency - href.modes[i].frequency) / href.modes[i].frequency;
    return mean / n_modes;
  };

  double lo = 0.5, hi = 2.0;
  double glo = objective(lo), ghi = objective(hi);
  double gamma;
  if (std::abs(glo) < 1e-7) {
    gamma = lo;
  } else if (std::abs(ghi) < 1e-7) {
    gamma = hi;
  } else {
    if (glo * ghi > 0.0)
      throw SolverError("scale_to_helmholtz: no root in bracket [0.5, 2.0]");
    while (hi - lo > 5e-7) {
      double mid = 0.5 * (lo + hi);
      double gm = objective(mid);
      if (gm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (gm * glo > 0.0) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    gamma = 0.5 * (lo + hi);
  }

  auto scaled = webster_resonances(scale_length(af, gamma), params,
                                   static_cast<int>(href.modes.size()));
  scaled.method = Method::kScaledWebster;
  return {gamma, std::move(scaled)};
}

}  // namespace vta::webster
