#include <benchmark/benchmark.h>

#include "carenet/analysis.hpp"
#include "carenet/distributions.hpp"
#include "carenet/dynamics.hpp"
#include "carenet/interventions.hpp"
#include "carenet/rng.hpp"
#include "carenet/scenario.hpp"
#include "carenet/world.hpp"

namespace carenet {
namespace {

ScenarioConfig scaled(std::int64_t n) {
  ScenarioConfig c;
  c.population.total = n;
  return c;
}

void BM_SamplePowerLaw(benchmark::State& state) {
  const auto spec = PowerLawSpec::with_mean(0, 60, 10.34);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_power_law(spec, uniform01(rng)));
}
BENCHMARK(BM_SamplePowerLaw);

void BM_SolveExponent(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_exponent(0, 60, 10.34));
}
BENCHMARK(BM_SolveExponent);

void BM_BuildWorld(benchmark::State& state) {
  const auto config = scaled(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    benchmark::DoNotOptimize(build_world(config, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildWorld)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_StepDay(benchmark::State& state) {
  const auto config = scaled(state.range(0));
  Rng rng(7);
  World world = build_world(config, rng);
  seed_infections(world, config.seeding, config.resolved_seed_count(), rng);
  for (int d = 0; d < 30; ++d) step_day(world, rng);
  for (auto _ : state) step_day(world, rng);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StepDay)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_EigenvectorCentrality(benchmark::State& state) {
  const auto config = scaled(state.range(0));
  Rng rng(3);
  const World world = build_world(config, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigenvector_centrality(world.people, world.network, world.masks,
                                                    config.transmission));
  }
}
BENCHMARK(BM_EigenvectorCentrality)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace carenet

BENCHMARK_MAIN();
