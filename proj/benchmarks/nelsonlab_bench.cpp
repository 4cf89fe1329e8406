#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nelsonlab/fock.hpp"
#include "nelsonlab/grid.hpp"
#include "nelsonlab/ibc.hpp"
#include "nelsonlab/inequalities.hpp"
#include "nelsonlab/nelson.hpp"
#include "nelsonlab/psido.hpp"

namespace {

using namespace nelsonlab;

constexpr double kBox = 2.0 * std::numbers::pi;

void BM_Dft(benchmark::State& state) {
  const Grid g(1, static_cast<int>(state.range(0)), kBox);
  const auto u = LatticeFunction::from(g, [](const Point& x) { return cplx(std::sin(x[0]), std::cos(2.0 * x[0])); });
  for (auto _ : state) benchmark::DoNotOptimize(dft(u));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dft)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_Quantize(benchmark::State& state) {
  const Grid g(1, static_cast<int>(state.range(0)), kBox);
  std::mt19937_64 rng(1);
  const Symbol a = random_band_limited_symbol(g, rng, false);
  for (auto _ : state) benchmark::DoNotOptimize(quantize(a, 0.5));
}
BENCHMARK(BM_Quantize)->Arg(16)->Arg(32)->Arg(64);

void BM_Moyal(benchmark::State& state) {
  const Grid g(1, static_cast<int>(state.range(0)), kBox);
  std::mt19937_64 rng(2);
  const Symbol a = random_band_limited_symbol(g, rng, false);
  const Symbol b = random_band_limited_symbol(g, rng, false);
  for (auto _ : state) benchmark::DoNotOptimize(moyal(a, b, 0.5));
}
BENCHMARK(BM_Moyal)->Arg(16)->Arg(32);

void BM_WeylOperator(benchmark::State& state) {
  const FockBasis b(1, static_cast<int>(state.range(0)));
  Vec f(1);
  f(0) = cplx(0.5, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(weyl(b, f));
}
BENCHMARK(BM_WeylOperator)->Arg(10)->Arg(20)->Arg(40);

void BM_CutoffHamiltonian(benchmark::State& state) {
  const Grid g(1, static_cast<int>(state.range(0)), kBox);
  const FreeModel m = assemble_free(ModelSpec::standard(g, 0.3, 1.0, 2, 8));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_cutoff_hamiltonian(m, 2.0));
}
BENCHMARK(BM_CutoffHamiltonian)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_BuildG(benchmark::State& state) {
  const Grid g(1, 8, kBox);
  const FreeModel m = assemble_free(ModelSpec::standard(g, 0.3, 1.0, 2, 8));
  for (auto _ : state) benchmark::DoNotOptimize(build_G(m, 2.0));
}
BENCHMARK(BM_BuildG)->Unit(benchmark::kMillisecond);

void BM_Factorization(benchmark::State& state) {
  const Grid g(1, 8, kBox);
  const FreeModel m = assemble_free(ModelSpec::standard(g, 0.3, 1.0, 2, 8));
  for (auto _ : state) benchmark::DoNotOptimize(factorization_identity_check(m, 2.0));
}
BENCHMARK(BM_Factorization)->Unit(benchmark::kMillisecond);

void BM_VacuumEnergySymbol(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vacuum_energy_symbol(3, 1.0, 1.0, lambda));
}
BENCHMARK(BM_VacuumEnergySymbol)->Arg(4)->Arg(64);

void BM_IntegralEstimate(benchmark::State& state) {
  IntegralEstimateParams p;
  p.nu = 1.0;
  p.sigma = 0.5;
  p.alpha = 2.0;
  p.gamma = 2.0;
  p.omega = 4.0;
  p.xi = 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(integral_estimate_check(p));
}
BENCHMARK(BM_IntegralEstimate)->Unit(benchmark::kMillisecond);

void BM_Rearrange(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(power_law_rearrangement(1, static_cast<int>(state.range(0)), 1.5, 1.0, 32.0));
}
BENCHMARK(BM_Rearrange)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
