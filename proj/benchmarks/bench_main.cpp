#include <benchmark/benchmark.h>

#include "cotagnet/analysis.hpp"
#include "cotagnet/cotag.hpp"
#include "cotagnet/distfit.hpp"
#include "cotagnet/generator.hpp"

using namespace cotagnet;

namespace {

GeneratorConfig config_for(std::int64_t questions) {
  const auto nq = static_cast<std::uint64_t>(questions);
  return {nq / 10, nq, nq * 3, 0.0, 1.5, 42, true};
}

void BM_Generate(benchmark::State& state) {
  const auto c = config_for(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate(c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.occurrences));
}
BENCHMARK(BM_Generate)->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMillisecond);

void BM_Project(benchmark::State& state) {
  const auto g = generate(config_for(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(project(g.graph));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.graph.occurrences()));
}
BENCHMARK(BM_Project)->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMillisecond);

void BM_Clustering(benchmark::State& state) {
  const auto g = project(generate(config_for(state.range(0))).graph);
  for (auto _ : state) benchmark::DoNotOptimize(clustering_report(g));
  state.counters["edges"] = static_cast<double>(g.n_edges());
}
BENCHMARK(BM_Clustering)->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMillisecond);

void BM_ExpectedUnique(benchmark::State& state) {
  const auto gen = generate(config_for(state.range(0)));
  const auto x = gen.graph.frequencies();
  const auto n_hat = gen.report.corrected_questions;
  for (auto _ : state) {
    double s = 0.0;
    for (TagId t = 0; t < x.size(); ++t) s += expected_unique_cotags(x, t, n_hat);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size() * x.size()));
}
BENCHMARK(BM_ExpectedUnique)->RangeMultiplier(10)->Range(1000, 10000)->Unit(benchmark::kMillisecond);

void BM_FitAll(benchmark::State& state) {
  const auto x = generate(config_for(state.range(0))).graph.frequencies();
  const std::vector<double> v(x.begin(), x.end());
  for (auto _ : state) {
    for (Family f : kAllFamilies) benchmark::DoNotOptimize(fit_family(f, v));
  }
}
BENCHMARK(BM_FitAll)->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
