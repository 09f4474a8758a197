#include <benchmark/benchmark.h>

#include "mrchialvo/attractors.hpp"
#include "mrchialvo/fixed_points.hpp"
#include "mrchialvo/map.hpp"
#include "mrchialvo/network.hpp"

using namespace mrchialvo;

static void BM_Iterate(benchmark::State& state) {
  const MapParams p{-0.7, 0.1, 0.2, 1.748, 1.03};
  for (auto _ : state) {
    auto o = iterate({0.5, 0.0}, p, 0, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(o.states.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Iterate)->Arg(1 << 12)->Arg(1 << 16);

static void BM_FixedPoints(benchmark::State& state) {
  const MapParams p{0.01, 0.5, 0.5, -0.1, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(find_fixed_points(p));
}
BENCHMARK(BM_FixedPoints);

static void BM_Lyapunov(benchmark::State& state) {
  const MapParams p{-0.7, 0.1, 0.2, 1.748, 1.03};
  for (auto _ : state) benchmark::DoNotOptimize(largest_lyapunov({0.5, 0.0}, p, 10000, 1000));
}
BENCHMARK(BM_Lyapunov);

static void BM_Correlation(benchmark::State& state) {
  const MapParams p{-0.7, 0.1, 0.2, 1.748, 1.03};
  const auto pts = attractor_points({0.5, 0.0}, p, 5000, static_cast<std::size_t>(state.range(0)));
  CorrelationOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(correlation_dimension(pts, opts));
}
BENCHMARK(BM_Correlation)->Arg(1000)->Arg(4000);

static void BM_NetworkStep(benchmark::State& state) {
  NetworkConfig cfg;
  cfg.sigma = 0.1;
  cfg.map = {2, 0.3, 0.5, -0.5, 1.2};
  NetworkState s = initial_state(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(network_step(s, cfg));
}
BENCHMARK(BM_NetworkStep);
BENCHMARK_MAIN();
