#include <benchmark/benchmark.h>

#include <complex>

#include "vta/geometry.hpp"
#include "vta/helmholtz3d.hpp"
#include "vta/numlin.hpp"
#include "vta/webster1d.hpp"

namespace {

using vta::numlin::Complex;

vta::geom::TetMesh duct_mesh(double h) {
  // extruded cylinder stands in for a vocal-tract-sized duct
  return vta::geom::make_cylinder_mesh(0.175, 0.01, h);
}

void BM_HelmholtzAssemble(benchmark::State& state) {
  auto mesh = duct_mesh(0.003);
  vta::helm3d::HelmholtzParams params;
  for (auto _ : state) {
    auto sys = vta::helm3d::assemble(mesh, params);
    benchmark::DoNotOptimize(sys.K.nnz());
  }
  state.counters["tets"] = static_cast<double>(mesh.tets.size());
}
BENCHMARK(BM_HelmholtzAssemble)->Unit(benchmark::kMillisecond);

void BM_SparseLU_Fem(benchmark::State& state) {
  auto mesh = duct_mesh(0.003);
  vta::helm3d::HelmholtzParams params;
  auto sys = vta::helm3d::assemble(mesh, params);
  Complex sigma(0.0, 2.0 * 3.141592653589793 * 300.0);
  auto S = vta::numlin::SparseMatrix::combine(sigma * sigma, sys.M, sigma, sys.C, 1.0,
                                              sys.K);
  for (auto _ : state) {
    vta::numlin::SparseLU lu(S);
    benchmark::DoNotOptimize(lu.size());
  }
  state.counters["n"] = static_cast<double>(S.size());
}
BENCHMARK(BM_SparseLU_Fem)->Unit(benchmark::kMillisecond);

void BM_WebsterResonances(benchmark::State& state) {
  auto af = vta::geom::make_tube(vta::geom::TubeShape::kCosineHorn, 0.175, 3e-4, 20);
  vta::webster::WebsterParams params;
  params.min_elements = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto rs = vta::webster::webster_resonances(af, params, 3);
    benchmark::DoNotOptimize(rs.modes[0].frequency);
  }
}
BENCHMARK(BM_WebsterResonances)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_HelmholtzResonances(benchmark::State& state) {
  auto mesh = duct_mesh(0.004);
  vta::helm3d::HelmholtzParams params;
  for (auto _ : state) {
    auto rs = vta::helm3d::resonances(mesh, params, 2);
    benchmark::DoNotOptimize(rs.modes[0].frequency);
  }
  state.counters["tets"] = static_cast<double>(mesh.tets.size());
}
BENCHMARK(BM_HelmholtzResonances)->Unit(benchmark::kMillisecond);

}  // namespace
