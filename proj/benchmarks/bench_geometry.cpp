#include "hypext/geometry.hpp"
#include "hypext/random.hpp"

#include <benchmark/benchmark.h>

using namespace hypext;

static void BM_Distance(benchmark::State& state) {
  Rng rng = make_stream(1, 0);
  const int m = static_cast<int>(state.range(0));
  const std::vector<HPoint> pts = sample_ball(HPoint::origin(m), 5.0, 256, rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(distance(pts[i & 255], pts[(i + 1) & 255]));
    ++i;
  }
}
BENCHMARK(BM_Distance)->Arg(2)->Arg(3)->Arg(8);

static void BM_ExpLog(benchmark::State& state) {
  Rng rng = make_stream(2, 0);
  const std::vector<HPoint> pts = sample_ball(HPoint::origin(3), 3.0, 256, rng);
  std::size_t i = 0;
  for (auto _ : state) {
    const TangentVec v = log_map(pts[i & 255], pts[(i + 7) & 255]);
    benchmark::DoNotOptimize(exp_map(v));
    ++i;
  }
}
BENCHMARK(BM_ExpLog);

static void BM_DTheta(benchmark::State& state) {
  double th = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d_theta(th, 3.0, 4.0));
    th = th < 3.0 ? th + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_DTheta);
