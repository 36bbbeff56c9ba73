// Microbenchmarks for the hot paths: per-phase condensation (called per
// quadrature cell when fields vary), the 2D and 3D cell pipelines, and the
// plate solve. Condensation is required to stay under a millisecond.

#include <benchmark/benchmark.h>

#include "pzp/cell2d.hpp"
#include "pzp/cell3d.hpp"
#include "pzp/condense.hpp"
#include "pzp/plate.hpp"

namespace {

using namespace pzp;

Material active_iso() {
  PiezoTensor d;
  d(2, 2, 2) = 1.0;
  return Material{ElasticTensor::isotropic(1.0, 1.0), d, Mat3::Identity()};
}

void BM_Condense(benchmark::State& state) {
  const Mat10 GT = assemble_global_tensor(active_iso());
  for (auto _ : state) benchmark::DoNotOptimize(condense(GT, 0.5));
}
BENCHMARK(BM_Condense);

void BM_HomogenizeThin(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CellMesh2D mesh = CellMesh2D::build(n, {Shape::Disk, 0.25});
  const Material matrix = Material::isotropic_elastic(1.0, 1.0);
  const Material inclusion = active_iso();
  for (auto _ : state)
    benchmark::DoNotOptimize(homogenize_thin(mesh, matrix, inclusion));
}
BENCHMARK(BM_HomogenizeThin)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_HomogenizeComparable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CellMesh3D mesh = CellMesh3D::build(n, n, {Shape::Disk, 0.25});
  const Material matrix = Material::isotropic_elastic(1.0, 1.0);
  const Material inclusion = active_iso();
  for (auto _ : state)
    benchmark::DoNotOptimize(homogenize_comparable(mesh, matrix, inclusion));
}
BENCHMARK(BM_HomogenizeComparable)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_PlateDirichlet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  EffectiveTensorsThin E;
  E.RM = Tensor4::isotropic(2.0 / 3.0, 1.0);
  E.RN = Tensor4::isotropic(2.0 / 3.0, 1.0);
  E.cM33 = 1.0;
  E.vol_Y1 = 0.25;
  PlateLoads raw;
  raw.f[2] = Poly3::parse("1");
  const ReducedLoads loads = reduce_loads(raw);
  const PlateMesh mesh(n, n, 1.0, 1.0, {true, true, true, true});
  const KLSpace space(mesh);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_dirichlet_thin(E, loads, space));
}
BENCHMARK(BM_PlateDirichlet)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
