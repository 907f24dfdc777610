#include <benchmark/benchmark.h>

#include <cmath>

#include "levyspde/functionals.hpp"
#include "levyspde/markov.hpp"
#include "levyspde/moments.hpp"
#include "levyspde/sampler.hpp"
#include "levyspde/semilinear.hpp"

using namespace levyspde;

static void BM_EnergyE(benchmark::State& state) {
  const auto sym = Symbol::stable(1.5);
  const auto phi = state.range(0) == 0 ? TestFunction::delta(0.0) : TestFunction::box(0.3, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(energy_E(sym, phi, 0.01).value);
}
BENCHMARK(BM_EnergyE)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_HawkesExistence(benchmark::State& state) {
  const auto sym = Symbol::stable(static_cast<double>(state.range(0)) / 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(hawkes_existence(sym).finite);
}
BENCHMARK(BM_HawkesExistence)->Arg(8)->Arg(15)->Unit(benchmark::kMillisecond);

static void BM_WaveIncrement(benchmark::State& state) {
  const auto sym = Symbol::stable(1.2);
  const auto phi = TestFunction::box(0.3, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(wave_increment_variance(sym, phi, 4.0, 0.01).value);
}
BENCHMARK(BM_WaveIncrement)->Unit(benchmark::kMillisecond);

static void BM_HeatSampler(benchmark::State& state) {
  const Lattice lat{2 * M_PI, static_cast<int>(state.range(0)), {0.25, 0.5, 1.0}};
  const auto sym = Symbol::stable(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_heat_field(sym, lat, 1, 100).size());
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_HeatSampler)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_Picard(benchmark::State& state) {
  Lattice lat{2 * M_PI, 32, {}};
  for (int i = 0; i <= 32; ++i) lat.times.push_back(i / 32.0);
  const auto h = simulate_heat_field(Symbol::brownian(), lat, 3, 1)[0];
  for (auto _ : state)
    benchmark::DoNotOptimize(picard_solve(Symbol::brownian(), Nonlinearity::scaled_tanh(1.0), h, lat).diagnostics.iterations);
}
BENCHMARK(BM_Picard)->Unit(benchmark::kMillisecond);

static void BM_ChainIdentity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> phi(n);
  for (int x = 0; x < n; ++x) phi[x] = std::cos(0.3 * x) + 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(verify_localtime_identity(ChainModel{n, 1.0}, phi, 1.0).residual);
}
BENCHMARK(BM_ChainIdentity)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_ChainMonteCarlo(benchmark::State& state) {
  std::vector<double> phi(16, 0.0);
  phi[0] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_chain_occupation(ChainModel{16, 1.0}, phi, 1.0, 2000, 1).second_moment);
}
BENCHMARK(BM_ChainMonteCarlo)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
