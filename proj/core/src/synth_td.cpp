#include "vta/synth_td.hpp"

#include <cmath>
#include <string>

#include "vta/errors.hpp"

namespace vta::synth {

TubeSim::TubeSim(const geom::AreaFunction& af, const TubeParams& params)
    : params_(params) {
  af.validate();
  if (params.n_segments < 2) throw ValidationError("synth_td: need at least 2 segments");
  if (params.fs < 8000.0) throw ValidationError("synth_td: fs must be >= 8000 Hz");
  if (params.d0 < 0.0 || params.D0 < 0.0)
    throw ValidationError("synth_td: negative loss coefficients");

  const int n = params.n_segments;
  const double L = af.length();
  h_ = L / n;
  substeps_ = std::max(1, static_cast<int>(std::ceil(
                              (1.0 / params.fs) / (params.cfl * h_ / params.c))));
  dt_ = 1.0 / params.fs / substeps_;

  area_cell_.resize(n);
  circ_cell_.resize(n);
  for (int j = 0; j < n; ++j) {
    auto s = af.at((j + 0.5) * h_);
    area_cell_[j] = s.area;
    circ_cell_[j] = s.circumference;
  }
  area_face_.resize(n + 1);
  for (int i = 0; i <= n; ++i) area_face_[i] = af.at(i * h_).area;

  state_.u.assign(n + 1, 0.0);
  state_.u_prev.assign(n + 1, 0.0);
  state_.p.assign(n, 0.0);
  state_.wall_y.assign(n, 0.0);
  state_.wall_v.assign(n, 0.0);

  // Constant tridiagonal system of the implicit u update, interfaces 1..n
  // (1..n-1 when the lip end is reflective):
  //   (1/(A dt) + d(A) + 2 D(A)/h^2) u'_j - D/h^2 (u'_{j-1} + u'_{j+1}) = rhs
  // with d(A) = d0 A^-3/2, D(A) = D0 A^-3/2 and a Neumann ghost past the lips.
  const int rows = params.reflective_ends ? n - 1 : n;
  diag_.assign(rows, 0.0);
  lower_.assign(rows, 0.0);
  upper_.assign(rows, 0.0);
  rhs_.assign(rows, 0.0);
  scratch_.assign(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    int i = r + 1;  // interface index
    double ai = area_face_[i];
    double damp = params.d0 * std::pow(ai, -1.5);
    double diff = params.D0 * std::pow(ai, -1.5) / (h_ * h_);
    bool lip_row = !params.reflective_ends && i == n;
    diag_[r] = 1.0 / (ai * dt_) + damp + (lip_row ? 1.0 : 2.0) * diff;
    lower_[r] = -diff;
    upper_[r] = -diff;
  }
}

double TubeSim::lip_flow() const { return params_.c * state_.u.back(); }

void TubeSim::step(Source& source) {
  const int n = params_.n_segments;
  const double c = params_.c;
  const bool vibrating = params_.wall == WallKind::kVibrating;

  // p update (and wall dynamics) from the current u
  for (int j = 0; j < n; ++j) {
    double a_old = area_cell_[j];
    double dadt = 0.0;
    if (vibrating) {
      const auto& wd = params_.wall_dynamics;
      double load = params_.rho0 * c * c * state_.p[j];
      double v_new = (state_.wall_v[j] + dt_ * (load - wd.k * state_.wall_y[j]) / wd.m) /
                     (1.0 + dt_ * wd.b / wd.m);
      double y_new = state_.wall_y[j] + dt_ * v_new;
      a_old = std::max(area_cell_[j] + circ_cell_[j] * state_.wall_y[j],
                       0.05 * area_cell_[j]);
      state_.wall_v[j] = v_new;
      state_.wall_y[j] = y_new;
      dadt = circ_cell_[j] * v_new;
    }
    double a_new = vibrating ? std::max(area_cell_[j] + circ_cell_[j] * state_.wall_y[j],
                                        0.05 * area_cell_[j])
                             : area_cell_[j];
    double q = a_old * state_.p[j];
    q -= dt_ * (c * (state_.u[j + 1] - state_.u[j]) / h_ + dadt);
    state_.p[j] = q / a_new;
  }

  // glottal drive sees the freshly updated inlet pressure
  t_ += dt_;
  double u0 = 0.0;
  if (!params_.reflective_ends)
    u0 = source.volume_velocity(t_, dt_, state_.p.front()) / c;

  // implicit u update (Thomas solve over interfaces 1..rows)
  state_.u_prev = state_.u;
  const int rows = static_cast<int>(diag_.size());
  for (int r = 0; r < rows; ++r) {
    int i = r + 1;
    double ai = area_face_[i];
    double grad;
    if (i == n)
      grad = (0.0 - state_.p[n - 1]) / (h_ / 2.0);  // p(L) = 0 half-cell closure
    else
      grad = (state_.p[i] - state_.p[i - 1]) / h_;
    rhs_[r] = state_.u[i] / (ai * dt_) - c * grad;
  }
  rhs_[0] -= lower_[0] * u0;

  // Thomas algorithm
  scratch_[0] = upper_[0] / diag_[0];
  rhs_[0] /= diag_[0];
  for (int r = 1; r < rows; ++r) {
    double m = diag_[r] - lower_[r] * scratch_[r - 1];
    scratch_[r] = upper_[r] / m;
    rhs_[r] = (rhs_[r] - lower_[r] * rhs_[r - 1]) / m;
  }
  for (int r = rows - 2; r >= 0; --r) rhs_[r] -= scratch_[r] * rhs_[r + 1];

  state_.u[0] = u0;
  for (int r = 0; r < rows; ++r) state_.u[r + 1] = rhs_[r];
  if (params_.reflective_ends) state_.u[n] = 0.0;

  if (++step_count_ % 256 == 0) {
    if (!std::isfinite(state_.u[n]) || !std::isfinite(state_.p[0]))
      throw SolverError("synth_td: non-finite state at step " +
                        std::to_string(step_count_) + " (t = " + std::to_string(t_) +
                        " s)");
  }
}

formant::Waveform simulate(const geom::AreaFunction& af, Source& source,
                           const TubeParams& params, double duration) {
  if (!(duration > 0.0)) throw ValidationError("simulate: duration must be positive");
  TubeSim sim(af, params);

  formant::Waveform w;
  w.fs = params.fs;
  const long nsamples = std::lround(duration * params.fs);
  w.samples.reserve(nsamples);
  double lip_prev = 0.0;
  for (long s = 0; s < nsamples; ++s) {
    for (int k = 0; k < sim.substeps_per_sample(); ++k) sim.step(source);
    double lip = sim.lip_flow();
    if (params.output == OutputSignal::kLipFlowDerivative)
      w.samples.push_back((lip - lip_prev) * params.fs);
    else
      w.samples.push_back(lip);
    lip_prev = lip;
  }
  return w;
}

WallShift formant_shift_experiment(const geom::AreaFunction& af, const TubeParams& params,
                                   const glottis::TwoMassParams& source_params) {
  auto run = [&](WallKind wall) {
    TubeParams p = params;
    p.wall = wall;
    TwoMassSource source(source_params);
    auto w = simulate(af, source, p, 0.7);
    return formant::formants_from_wave(w, 1).frequencies[0];
  };
  return {run(WallKind::kRigid), run(WallKind::kVibrating)};
}

}  // namespace vta::synth
