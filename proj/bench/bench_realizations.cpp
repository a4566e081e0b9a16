#include <benchmark/benchmark.h>

#include "randop/estimators.hpp"

using namespace randop;

namespace {

McConfig chain_config(std::int64_t n, std::size_t samples, Execution exec) {
  return McConfig{ModelSpec{LatticeBox({n}), LaplacianHopping{}, DisorderDensity::uniform(0.0, 1.0)}, samples, 1, exec};
}

Execution backend_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution{1, Backend::serial} : Execution{static_cast<int>(state.range(0)), Backend::openmp};
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

void bm_minami(benchmark::State& state) {
  const auto config = chain_config(32, 256, backend_of(state));
  const SiteIndex delta[] = {15, 16};
  const ComplexEnergy z(0.5, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(mc_minami(config, z, delta));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config.samples));
  label(state);
}

void bm_ids(benchmark::State& state) {
  const auto config = chain_config(200, 64, backend_of(state));
  const double energies[] = {0.0, 0.5, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(ids_curve(config, energies));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config.samples));
  label(state);
}

void bm_magnetic_minami(benchmark::State& state) {
  auto config = chain_config(32, 128, backend_of(state));
  config.model = ModelSpec{LatticeBox({4, 8}), landau_gauge(0.2), DisorderDensity::uniform(0.0, 1.0)};
  const SiteIndex delta[] = {12, 13};
  for (auto _ : state) benchmark::DoNotOptimize(mc_minami(config, ComplexEnergy(0.5, 0.1), delta));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config.samples));
  label(state);
}

}  // namespace

// range(0): 0 = serial reference, k > 0 = OpenMP with k workers
BENCHMARK(bm_minami)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_ids)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_magnetic_minami)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
