#include <benchmark/benchmark.h>

#include "dynauct/dist.hpp"

namespace {

static void BM_ExpectedOrderStatContinuous(benchmark::State& state) {
  dynauct::ExponentialDist e(1.0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynauct::expected_order_stat(e, 2, n));
  }
}
BENCHMARK(BM_ExpectedOrderStatContinuous)->Arg(2)->Arg(8)->Arg(32);

static void BM_OrderStatCdfDiscrete(benchmark::State& state) {
  std::vector<double> v, p;
  const int k = static_cast<int>(state.range(0));
  for (int i = 0; i < k; ++i) {
    v.push_back(i);
    p.push_back(1.0 / k);
  }
  dynauct::DiscreteDist d(v, p);
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      acc += dynauct::order_stat_cdf(d, 2, 8, d.value(i));
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_OrderStatCdfDiscrete)->Arg(16)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
