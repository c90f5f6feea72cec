#include <benchmark/benchmark.h>

#include <vector>

#include "sdftest/equality_test.hpp"
#include "sdftest/simulator.hpp"
#include "sdftest/spline.hpp"
#include "sdftest/transform.hpp"

namespace {

using namespace sdftest;

TimeSeries ar1_series(int n, std::uint64_t stream = 0) {
  return sample_series(SpectralModel::ar1(0.5), n, {42, stream});
}

void BM_Dct1(benchmark::State& state) {
  const auto x = ar1_series(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dct1(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dct1)->Arg(350)->Arg(1000)->Arg(1024)->Arg(1025)->Arg(1200)->Arg(4096);

void BM_Transform(benchmark::State& state) {
  const auto x = ar1_series(1200);
  for (auto _ : state) benchmark::DoNotOptimize(transform(x, 143, 8));
}
BENCHMARK(BM_Transform);

void BM_SelectBandwidth(benchmark::State& state) {
  const auto t = transform(ar1_series(1200), 143, 8);
  const auto method = state.range(0) == 0 ? Selection::gcv : Selection::gml;
  for (auto _ : state) benchmark::DoNotOptimize(select_bandwidth(t.ystar, 6, method));
}
BENCHMARK(BM_SelectBandwidth)->Arg(0)->Arg(1);

void BM_SamplePair(benchmark::State& state) {
  const GaussianSampler sampler(SpectralModel::ar1(0.5), 1200);
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample_pair(1200, 1000, {42, ++stream}));
}
BENCHMARK(BM_SamplePair);

void BM_SamplerSetupTabulated(benchmark::State& state) {
  const auto x = ar1_series(1200);
  TestConfig config;
  config.q = 6;
  config.bins = 143;
  const auto plan = plan_bins(1200, 1000, 143);
  const auto fhat = estimate_pooled_sdf(x, config, plan);
  for (auto _ : state) benchmark::DoNotOptimize(GaussianSampler(fhat, 1200));
}
BENCHMARK(BM_SamplerSetupTabulated)->Unit(benchmark::kMicrosecond);

// One Monte Carlo null replicate: draw a pair, transform, select, statistic.
void BM_NullReplicate(benchmark::State& state) {
  const GaussianSampler sampler(SpectralModel::ar1(0.5), 1200);
  TestConfig config;
  config.q = 6;
  const auto plan = plan_bins(1200, 1000, 143);
  std::uint64_t stream = 0;
  for (auto _ : state) {
    const auto [x1, x2] = sampler.sample_pair(1200, 1000, {42, ++stream});
    benchmark::DoNotOptimize(pair_statistic(x1, x2, plan, config));
  }
}
BENCHMARK(BM_NullReplicate)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
