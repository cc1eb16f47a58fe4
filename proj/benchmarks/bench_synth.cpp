#include <benchmark/benchmark.h>

#include <cmath>

#include "vta/formant.hpp"
#include "vta/glottis.hpp"
#include "vta/synth_td.hpp"

namespace {

void BM_SynthSecond(benchmark::State& state) {
  auto af = vta::geom::make_tube(vta::geom::TubeShape::kCylinder, 0.175, 3e-4,
                                 static_cast<int>(state.range(0)));
  vta::synth::TubeParams params;
  params.n_segments = static_cast<int>(state.range(0));
  params.wall = vta::synth::WallKind::kVibrating;
  for (auto _ : state) {
    vta::synth::TwoMassSource source{vta::glottis::TwoMassParams{}};
    auto w = vta::synth::simulate(af, source, params, 1.0);
    benchmark::DoNotOptimize(w.samples.back());
  }
}
BENCHMARK(BM_SynthSecond)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_GlottisStep(benchmark::State& state) {
  vta::glottis::TwoMassParams params;
  vta::glottis::GlottalState s;
  for (auto _ : state) {
    s = vta::glottis::step(s, 0.0, params, 1.0 / 44100.0);
    benchmark::DoNotOptimize(s.u_g);
  }
}
BENCHMARK(BM_GlottisStep);

void BM_FormantsFromWave(benchmark::State& state) {
  vta::formant::Waveform w;
  w.fs = 44100.0;
  constexpr double kPi = 3.14159265358979323846;
  for (int i = 0; i < static_cast<int>(w.fs * 0.5); ++i) {
    double t = i / w.fs;
    w.samples.push_back(std::exp(-kPi * 80.0 * t) *
                        (std::sin(2 * kPi * 700.0 * t) + std::sin(2 * kPi * 1200.0 * t)));
  }
  for (auto _ : state) {
    auto est = vta::formant::formants_from_wave(w, 2);
    benchmark::DoNotOptimize(est.frequencies[0]);
  }
}
BENCHMARK(BM_FormantsFromWave)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
