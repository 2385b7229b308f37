#include <benchmark/benchmark.h>

#include <random>

#include "noteffect/cascade/cascade.hpp"
#include "noteffect/pipeline/stages.hpp"
#include "noteffect/scm/simplex_ls.hpp"
#include "oracles.hpp"

using namespace noteffect;

// Weight fit at the budget shape: donors x grid points.
static void BM_SimplexLs(benchmark::State& state) {
  const auto donors = static_cast<int>(state.range(0));
  const auto points = static_cast<int>(state.range(1));
  std::mt19937_64 rng(1);
  std::vector<oracle::Instance> instances;
  for (int i = 0; i < 16; ++i) instances.push_back(oracle::random_instance(rng, donors, points));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& in = instances[i++ % instances.size()];
    benchmark::DoNotOptimize(solve_simplex_ls(in.X, in.y));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimplexLs)->Args({100, 100})->Args({50, 100})->Args({1000, 40});

static void BM_CascadeAppend(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto parent = oracle::random_tree(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    CascadeTree t(0);
    for (std::size_t v = 1; v < parent.size(); ++v) t.add_node(parent[v], static_cast<Millis>(v), "");
    benchmark::DoNotOptimize(t.structural_virality());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CascadeAppend)->Arg(100)->Arg(1000)->Arg(10000);

// Whole fit stage on a small simulated cohort.
static void BM_FitStage(benchmark::State& state) {
  sim::SimConfig c;
  c.seed = 3;
  c.treated_count = 20;
  c.donor_count = static_cast<std::size_t>(state.range(0));
  auto a = pipeline::archive_from_sim(sim::simulate_cohort(c));
  pipeline::PipelineConfig pc;
  pc.workers = 1;
  pipeline::filter_stage(a, pc);
  pipeline::cascade_stage(a, 1);
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::fit_stage(a, pc));
  state.SetItemsProcessed(state.iterations() * 20);
}
BENCHMARK(BM_FitStage)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
