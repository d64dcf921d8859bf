#include <benchmark/benchmark.h>

#include "sparsebound/sparsebound.hpp"

using namespace sparsebound;

namespace {

DenseMatrix mixed(std::size_t m, std::size_t n) {
  // Mixed signs so the same-sign shortcut does not apply.
  return generate({Pattern::Uniform12, m, n, std::nullopt}, 1) - DenseMatrix::filled(m, n, 1.5);
}

void BM_InfTo1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = mixed(64, n);
  for (auto _ : state) benchmark::DoNotOptimize(norm_inf_to_1(a));
}
BENCHMARK(BM_InfTo1)->DenseRange(8, 20, 4)->Unit(benchmark::kMillisecond);

void BM_InfTo2(benchmark::State& state) {
  const auto a = mixed(64, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(norm_inf_to_2(a));
}
BENCHMARK(BM_InfTo2)->DenseRange(8, 20, 4)->Unit(benchmark::kMillisecond);

void BM_Spectral(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = mixed(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(norm_spectral(a));
}
BENCHMARK(BM_Spectral)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMicrosecond);

void BM_OptimizeDiag(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto v = generate({Pattern::Uniform12, n, n, std::nullopt}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_diag(v).objective);
}
BENCHMARK(BM_OptimizeDiag)->RangeMultiplier(2)->Range(8, 128)->Unit(benchmark::kMicrosecond);

void BM_Sample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto bs = sparsebound::bind(ModifiedNonuniform{0.3, std::nullopt}, mixed(n, n));
  std::uint64_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample(bs, 7, t++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_Sample)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace

BENCHMARK_MAIN();
