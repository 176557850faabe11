#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "vpfp/kinetic.hpp"
#include "vpfp/particles.hpp"
#include "vpfp/poisson.hpp"

using namespace vpfp;

namespace {

double maxwellian(double v) { return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi); }

PhaseField bump(const SpatialGrid& xg, const VelocityGrid& vg) {
  return PhaseField::sample(xg, vg, [](const auto& x, const auto& v) {
    return (1.0 + 0.2 * std::sin(2.0 * std::numbers::pi * x[0])) * maxwellian(v[0]);
  });
}

void BM_VfpStep(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto xg = SpatialGrid::line(1.0, n);
  const VelocityGrid vg{1, 8.0, n};
  const auto f = bump(xg, vg);
  const auto g = InflowData::zero(xg, vg);
  const std::vector<double> u(n, 0.1), grad(n, 0.0);
  const double dt = 0.5 * kinetic_cfl_limit(f);
  for (auto _ : state) benchmark::DoNotOptimize(vfp_step(f, u, grad, dt, g));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * n);
}
BENCHMARK(BM_VfpStep)->Arg(32)->Arg(64)->Arg(128);

void BM_Poisson1D(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto xg = SpatialGrid::line(1.0, n);
  std::vector<double> rho(n), c(n, 0.0);
  for (int i = 0; i < n; ++i) rho[i] = std::sin(std::numbers::pi * xg.center(0, i));
  for (auto _ : state) benchmark::DoNotOptimize(solve_poisson(xg, rho, c));
}
BENCHMARK(BM_Poisson1D)->Arg(256)->Arg(4096);

void BM_PoissonRegularized(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto xg = SpatialGrid::line(1.0, n);
  std::vector<double> rho(n), c(n, 0.0);
  for (int i = 0; i < n; ++i) rho[i] = std::sin(std::numbers::pi * xg.center(0, i));
  for (auto _ : state) benchmark::DoNotOptimize(solve_poisson_regularized(xg, rho, c, 1e-4));
}
BENCHMARK(BM_PoissonRegularized)->Arg(256)->Arg(4096);

void BM_EmStep(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const auto xg = SpatialGrid::line(1.0, 16);
  const VelocityGrid vg{1, 8.0, 64};
  const auto ens = init_ensemble(bump(xg, vg), count, 1);
  const ParticleFields fields{xg, std::vector<double>(16, 0.0), std::vector<double>(16, 0.0), {}};
  const InteractionKernel kernel{KernelMode::Mesh, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(em_step(ens, fields, 1e-3, kernel));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(count));
}
BENCHMARK(BM_EmStep)->Arg(4096)->Arg(65536);

}  // namespace
BENCHMARK_MAIN();
