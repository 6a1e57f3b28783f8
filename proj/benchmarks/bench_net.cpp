#include "hypext/net.hpp"
#include "hypext/random.hpp"

#include <benchmark/benchmark.h>

using namespace hypext;

static void BM_GreedyNet(benchmark::State& state) {
  Rng rng = make_stream(5, 0);
  const std::vector<HPoint> sample =
      sample_ball(HPoint::origin(2), 3.0, static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_net(sample, 0.1, 4.0).num_bins);
  }
}
BENCHMARK(BM_GreedyNet)->Arg(300)->Arg(2000)->Unit(benchmark::kMillisecond);
