#include <benchmark/benchmark.h>

#include "subseries/accumulator.hpp"
#include "subseries/catalog.hpp"
#include "subseries/ito_nisio.hpp"
#include "subseries/orlicz_pettis.hpp"

using namespace subseries;

namespace {

void BM_SampleHaar(benchmark::State& state) {
  Seed seed{1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(sample_haar(seed, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleHaar)->Arg(1 << 10)->Arg(1 << 16);

void BM_NormAccumulator(benchmark::State& state) {
  auto fam = catalog(state.range(0) == 0 ? "l2_diagonal" : "linf_monomial");
  auto terms = fam.series.terms(state.range(1));
  for (auto _ : state) {
    NormAccumulator acc(fam.series.space());
    double m = 0;
    for (const auto& t : terms) {
      acc.add(t);
      m = std::max(m, acc.norm());
    }
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_NormAccumulator)->Args({0, 4096})->Args({1, 1024})->Unit(benchmark::kMicrosecond);

void BM_ExactMonomialNorm(benchmark::State& state) {
  auto fam = catalog("linf_monomial");
  auto eps = haar_signs(Seed{2, 0});
  auto sum = exact_partial_sum(fam.series, eps, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compare_norm(sum, Rational(1)));
}
BENCHMARK(BM_ExactMonomialNorm)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_DetectStrong(benchmark::State& state) {
  auto fam = catalog("l2_diagonal", {{"alpha", Rational(3, 5)}});
  Detector det(fam.series, Budget{});
  std::uint64_t j = 0;
  for (auto _ : state) benchmark::DoNotOptimize(det.strong(haar_signs(Seed{3, 0}.substream(j++))));
}
BENCHMARK(BM_DetectStrong)->Unit(benchmark::kMillisecond);

void BM_DetectWeak(benchmark::State& state) {
  auto fam = catalog("l2_diagonal", {{"alpha", Rational(3, 5)}});
  Detector det(fam.series, Budget{}, detection_family(fam.series.space()));
  std::uint64_t j = 0;
  for (auto _ : state) benchmark::DoNotOptimize(det.weak(haar_signs(Seed{4, 0}.substream(j++))));
}
BENCHMARK(BM_DetectWeak)->Unit(benchmark::kMillisecond);

void BM_LevyExhaustive(benchmark::State& state) {
  auto terms = catalog("l2_diagonal").series.exact_terms(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(levy_check_exhaustive(terms, Rational(3, 2)));
}
BENCHMARK(BM_LevyExhaustive)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

void BM_ExtractBlocks(benchmark::State& state) {
  auto fam = catalog("c0_paired");
  for (auto _ : state) benchmark::DoNotOptimize(extract_blocks(fam.series, Rational(1), state.range(0), Budget{}));
}
BENCHMARK(BM_ExtractBlocks)->Arg(8)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
