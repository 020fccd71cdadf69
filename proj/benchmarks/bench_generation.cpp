#include <benchmark/benchmark.h>

#include "posegen/closure.hpp"
#include "posegen/generator.hpp"
#include "posegen/noise.hpp"

namespace {

posegen::GenerationConfig base_config() {
  posegen::GenerationConfig cfg;
  cfg.n_agents = 4;
  cfg.n_steps = 2000;
  cfg.intra_lc.prob_at_zero = 0.5;
  cfg.inter_lc.prob_at_zero = 0.1;
  return cfg;
}

void BM_GenerateAgents(benchmark::State& state) {
  auto cfg = base_config();
  cfg.n_agents = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(posegen::generate(cfg));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GenerateAgents)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oN);

void BM_GenerateSteps(benchmark::State& state) {
  auto cfg = base_config();
  cfg.n_steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(posegen::generate(cfg));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GenerateSteps)->RangeMultiplier(2)->Range(1000, 8000)->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oN);

void BM_GenerateRadius(benchmark::State& state) {
  auto cfg = base_config();
  cfg.intra_lc.radius = static_cast<double>(state.range(0));
  cfg.inter_lc.radius = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(posegen::generate(cfg));
  }
}
BENCHMARK(BM_GenerateRadius)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond);

void BM_SpatialIndexQuery(benchmark::State& state) {
  auto cfg = base_config();
  cfg.n_steps = 10000;
  auto rng = posegen::walk_stream(1, 0);
  const auto traj = posegen::generate_trajectory(0, cfg, rng);
  posegen::SpatialIndex index;
  index.insert_trajectory(0, traj);
  index.build();
  const double radius = static_cast<double>(state.range(0));
  std::vector<posegen::SpatialIndex::Hit> hits;
  std::size_t k = 0;
  for (auto _ : state) {
    index.query_into(traj[k].x, traj[k].y, radius, hits);
    benchmark::DoNotOptimize(hits.data());
    k = (k + 1) % traj.size();
  }
}
BENCHMARK(BM_SpatialIndexQuery)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_OdomInformationExact(benchmark::State& state) {
  const posegen::OdomNoiseParams p{0.023, 0.023};
  double phi = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(posegen::odom_information_exact(phi, 1.0, p));
    phi = phi == 0.0 ? posegen::kHalfPi : 0.0;
  }
}
BENCHMARK(BM_OdomInformationExact);

}  // namespace

BENCHMARK_MAIN();
