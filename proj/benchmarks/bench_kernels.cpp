// Serial reference kernels versus the blocked kernels, run sequentially and
// with OpenMP. Sizes follow the simulated protocol: 50 training rows per
// class, 500 test rows, D in {100, 1000}.

#include <benchmark/benchmark.h>

#include "gsavg/block_estimation.hpp"
#include "gsavg/kernels.hpp"
#include "gsavg/simgen.hpp"

using namespace gsavg;

namespace {

Matrix sample(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  return generate({2, rows / 2, dim, seed}).data.features;
}

void BM_PairwiseSerial(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto x = sample(100, dim, 1);
  const auto blocking = Blocking::consecutive(dim, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::pairwise_block(x, blocking, GammaKind::exp_saturate));
}

void BM_PairwiseBlocked(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Exec exec = state.range(1) ? Exec::parallel : Exec::sequential;
  const BlockedRows x(sample(100, dim, 1), Blocking::consecutive(dim, 2));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pairwise_block(x, GammaKind::exp_saturate, exec));
}

void BM_CrossSerial(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto a = sample(500, dim, 2), b = sample(50, dim, 3);
  const auto blocking = Blocking::consecutive(dim, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::cross_block(a, b, blocking, GammaKind::exp_saturate));
}

void BM_CrossBlocked(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Exec exec = state.range(1) ? Exec::parallel : Exec::sequential;
  const auto blocking = Blocking::consecutive(dim, 2);
  const BlockedRows a(sample(500, dim, 2), blocking), b(sample(50, dim, 3), blocking);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::cross_block(a, b, GammaKind::exp_saturate, exec));
}

void BM_CorrelationGram(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Exec exec = state.range(1) ? Exec::parallel : Exec::sequential;
  const auto d = generate({2, 50, dim, 4}).data;
  for (auto _ : state) benchmark::DoNotOptimize(correlation_dissimilarity(d, CorrelationMethod::pearson, exec));
}

void BM_AverageLinkage(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto l = correlation_dissimilarity(generate({2, 50, dim, 5}).data, CorrelationMethod::pearson).values;
  for (auto _ : state) benchmark::DoNotOptimize(average_linkage(l));
}

}  // namespace

BENCHMARK(BM_PairwiseSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PairwiseBlocked)->ArgsProduct({{100, 1000}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CrossSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CrossBlocked)->ArgsProduct({{100, 1000}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CorrelationGram)->ArgsProduct({{100, 1000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AverageLinkage)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
