#pragma once

#include <memory>
#include <vector>

#include "vta/formant.hpp"
#include "vta/geometry.hpp"
#include "vta/glottis.hpp"

namespace vta::synth {

// Damped mass-spring wall per unit area; defaults give the classic closed-tract
// resonance near 190 Hz for vocal-tract proportions (configuration values).
struct WallDynamics {
  double m = 21.0;      // kg/m^2
  double b = 8000.0;    // N s/m^3
  double k = 845000.0;  // N/m^3
};

enum class WallKind { kRigid, kVibrating };
enum class OutputSignal { kLipFlowDerivative, kLipFlow };

struct TubeParams {
  double c = 350.0;
  double rho0 = 1.2;
  double d0 = 1.6;    // wall loss coefficient, m/s
  double D0 = 0.002;  // diffusion coefficient, m^3/s
  int n_segments = 20;
  double fs = 44100.0;
  WallKind wall = WallKind::kRigid;
  WallDynamics wall_dynamics;
  OutputSignal output = OutputSignal::kLipFlowDerivative;
  double cfl = 0.5;  // internal-step target; substeps are added to honor it
  // Validation rig: closed glottis and closed lips (reflective at both ends),
  // replacing the u(0)=u_g and p(L)=0 conditions.
  bool reflective_ends = false;
};

struct TubeState {
  std::vector<double> u;       // scaled volume velocity U/c at interfaces (n+1)
  std::vector<double> u_prev;  // previous internal step, for the staggered energy
  std::vector<double> p;       // scaled density deviation per segment (n)
  std::vector<double> wall_y;  // wall displacement per segment, 0 when rigid
  std::vector<double> wall_v;
};

// Glottal drive: physical volume velocity for the internal step ending at t.
// p_inlet is the tract's scaled pressure in the first segment.
class Source {
 public:
  virtual ~Source() = default;
  virtual double volume_velocity(double t, double dt, double p_inlet) = 0;
};

class ImpulseSource : public Source {
 public:
  explicit ImpulseSource(double amplitude = 1e-4) : amplitude_(amplitude) {}
  double volume_velocity(double, double, double) override {
    if (fired_) return 0.0;
    fired_ = true;
    return amplitude_;
  }

 private:
  double amplitude_;
  bool fired_ = false;
};

// Prescribed u_g series sampled at `rate`, zero-order hold, zero past the end.
class SeriesSource : public Source {
 public:
  SeriesSource(std::vector<double> series, double rate)
      : series_(std::move(series)), rate_(rate) {}
  double volume_velocity(double t, double, double) override {
    auto i = static_cast<size_t>(t * rate_);
    return i < series_.size() ? series_[i] : 0.0;
  }

 private:
  std::vector<double> series_;
  double rate_;
};

// Two-mass vocal folds, optionally fed back the tract inlet pressure.
class TwoMassSource : public Source {
 public:
  explicit TwoMassSource(const glottis::TwoMassParams& params, bool feedback = true)
      : params_(params), feedback_(feedback) {}
  double volume_velocity(double, double dt, double p_inlet) override {
    state_ = glottis::step(state_, feedback_ ? p_inlet : 0.0, params_, dt);
    return state_.u_g;
  }
  const glottis::GlottalState& state() const { return state_; }

 private:
  glottis::TwoMassParams params_;
  glottis::GlottalState state_;
  bool feedback_;
};

// Staggered-grid solver: u on segment interfaces, p on segment centers,
// leapfrog advection with the loss and diffusion terms treated implicitly
// (one tridiagonal solve per step).
class TubeSim {
 public:
  TubeSim(const geom::AreaFunction& af, const TubeParams& params);

  void step(Source& source);
  const TubeState& state() const { return state_; }
  TubeState& mutable_state() { return state_; }  // initial conditions for rigs
  double dt() const { return dt_; }
  int substeps_per_sample() const { return substeps_; }
  double time() const { return t_; }
  double lip_flow() const;  // physical volume velocity at the lips, m^3/s

  const std::vector<double>& cell_areas() const { return area_cell_; }
  const std::vector<double>& face_areas() const { return area_face_; }

 private:
  TubeParams params_;
  TubeState state_;
  std::vector<double> area_cell_, circ_cell_, area_face_;
  std::vector<double> diag_, lower_, upper_;  // tridiagonal factors (u update)
  std::vector<double> rhs_, scratch_;
  double h_ = 0.0, dt_ = 0.0, t_ = 0.0;
  int substeps_ = 1;
  long step_count_ = 0;
};

formant::Waveform simulate(const geom::AreaFunction& af, Source& source,
                           const TubeParams& params, double duration);

struct WallShift {
  double f1_rigid;
  double f1_vibrating;
};

// Runs the synthesizer twice (rigid vs vibrating walls) with a two-mass
// source and extracts F1 from each output.
WallShift formant_shift_experiment(const geom::AreaFunction& af, const TubeParams& params,
                                   const glottis::TwoMassParams& source_params = {});

}  // namespace vta::synth
