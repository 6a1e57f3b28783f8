#include "hypext/one_point.hpp"
#include "hypext/random.hpp"

#include <benchmark/benchmark.h>

using namespace hypext;

static void BM_SolveOnePoint(benchmark::State& state) {
  Rng rng = make_stream(3, 0);
  const PartialMap map = random_lipschitz_map(2, static_cast<std::size_t>(state.range(0)), 1.0, rng);
  const std::vector<HPoint> queries = random_challenge_points(map, 2.5, 32, rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_one_point(map, queries[i++ & 31]).c_xi);
  }
}
BENCHMARK(BM_SolveOnePoint)->Arg(5)->Arg(50)->Arg(300)->Unit(benchmark::kMicrosecond);

static void BM_SolveOnePointSubgradient(benchmark::State& state) {
  Rng rng = make_stream(4, 0);
  const PartialMap map = random_lipschitz_map(2, 8, 1.0, rng);
  const std::vector<HPoint> queries = random_challenge_points(map, 2.5, 32, rng);
  SolverOptions opts;
  opts.method = SolverMethod::kSubgradient;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_one_point(map, queries[i++ & 31], opts).c_xi);
  }
}
BENCHMARK(BM_SolveOnePointSubgradient)->Unit(benchmark::kMillisecond);
