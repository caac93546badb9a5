#include <benchmark/benchmark.h>

#include <random>

#include "rothman/diagnostics.hpp"
#include "rothman/fixtures.hpp"
#include "rothman/glm.hpp"
#include "rothman/measures.hpp"
#include "rothman/render.hpp"
#include "rothman/figures.hpp"
#include "rothman/simulate.hpp"

using namespace rothman;

static void BM_FitNoInteraction(benchmark::State& state) {
  const ModelSpec spec{static_cast<Link>(state.range(0)), Terms::exposure_plus_stratum,
                       fixtures::whickham_six_strata_synthetic()};
  for (auto _ : state) benchmark::DoNotOptimize(fit(spec));
}
BENCHMARK(BM_FitNoInteraction)->DenseRange(0, 3);

static void BM_ProfileInterval(benchmark::State& state) {
  const ModelSpec spec{static_cast<Link>(state.range(0)), Terms::exposure_plus_stratum,
                       fixtures::whickham()};
  for (auto _ : state) benchmark::DoNotOptimize(profile_interval(spec));
}
BENCHMARK(BM_ProfileInterval)->DenseRange(0, 3);

static void BM_Analyze(benchmark::State& state) {
  const auto table = fixtures::whickham();
  AnalysisOptions options;
  options.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(analyze(table, options));
}
BENCHMARK(BM_Analyze)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static std::vector<RiskPoint> random_points(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RiskPoint> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), u(rng), PointKind::stratum, {}});
  return pts;
}

static void BM_Hull(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(standardized_hull(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hull)->RangeMultiplier(8)->Range(8, 32768)->Complexity(benchmark::oNLogN);

static void BM_CollapseAnalysis(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(collapse_analysis(Measure::odds_ratio, pts));
}
BENCHMARK(BM_CollapseAnalysis)->Arg(2)->Arg(6)->Arg(50);

static void BM_SampleTable(benchmark::State& state) {
  PopulationSpec spec;
  spec.stratum_probs = {0.3, 0.4, 0.3};
  spec.exposure_probs = {0.2, 0.5, 0.8};
  spec.po_probs = {{0.7, 0.1, 0.1, 0.1}, {0.5, 0.2, 0.2, 0.1}, {0.2, 0.3, 0.2, 0.3}};
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_table(spec, n, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleTable)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_RenderContours(benchmark::State& state) {
  const auto table = fixtures::whickham();
  for (auto _ : state) benchmark::DoNotOptimize(render_figure(build_figure(4, table)));
}
BENCHMARK(BM_RenderContours)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
