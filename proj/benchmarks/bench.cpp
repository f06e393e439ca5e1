// Microbenchmarks for the hot paths: heuristic population generation, tree
// extension and cached draws, the estimator arithmetic, and the exact chain
// oracle.  Not registered with ctest; run benchmarks/sss_bench directly.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sss/estimator.hpp"
#include "sss/heuristic.hpp"
#include "sss/ising.hpp"
#include "sss/params.hpp"
#include "sss/rng.hpp"
#include "sss/sampler.hpp"
#include "sss/sstree.hpp"

namespace {

using namespace sss;

// One full annealing run on an SK instance; items = site visits.
void BM_SaSample(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const IsingModel model = generate_sk(m, 11);
  const PartialState constraint(m);
  SaSchedule schedule;
  schedule.n_steps = 100;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    SpinState y = sa_sample(model, constraint, schedule, 1.0, seed++);
    benchmark::DoNotOptimize(y);
  }
  state.SetItemsProcessed(state.iterations() * m * schedule.n_steps);
}
BENCHMARK(BM_SaSample)->Arg(100)->Arg(216);

// Whole constrained population through the threading front end.
void BM_Population(benchmark::State& state) {
  const int m = 100;
  const IsingModel model = generate_chain(m, 12);
  ExactChainHeuristic heuristic;
  HeuristicRequest request;
  request.constraint = PartialState(m);
  request.population_size = state.range(0);
  request.beta = 1.0;
  for (auto _ : state) {
    request.seed++;
    SamplePopulation pop = heuristic.run_constrained(model, request);
    benchmark::DoNotOptimize(pop);
  }
  state.SetItemsProcessed(state.iterations() * request.population_size);
}
BENCHMARK(BM_Population)->Arg(200)->Arg(2000);

// One refresh from the root of a fresh tree (population + growth + KL gate).
void BM_TreeExtend(benchmark::State& state) {
  const int m = 100;
  const IsingModel model = generate_chain(m, 13);
  ExactChainHeuristic heuristic;
  SamplerParams params;
  params.population_size = state.range(0);
  params.theta = 0.05;
  params.beta = 1.0;
  std::mt19937_64 eng(1);
  for (auto _ : state) {
    params.seed++;
    SubcubeTree tree(model, params);
    tree.extend(tree.root(), heuristic, eng);
    benchmark::DoNotOptimize(tree.tree_size());
  }
}
BENCHMARK(BM_TreeExtend)->Arg(200)->Arg(2000);

// Draws against a warmed cached tree; extensions still fire occasionally on
// fresh incomplete leaves, as in real use.
void BM_CachedDraw(benchmark::State& state) {
  const int m = 100;
  const IsingModel model = generate_chain(m, 14);
  ExactChainHeuristic heuristic;
  SamplerParams params;
  params.population_size = 500;
  params.theta = 0.05;
  params.beta = 1.0;
  params.seed = 7;
  SubcubeTree tree(model, params);
  std::mt19937_64 eng(2);
  for (int d = 0; d < 50; ++d) draw(tree, heuristic, eng);
  for (auto _ : state) {
    DrawResult r = draw(tree, heuristic, eng);
    benchmark::DoNotOptimize(r.log_q);
  }
}
BENCHMARK(BM_CachedDraw);

// Estimator arithmetic on a k-cell partition.
void BM_WorstCaseKl(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::mt19937_64 eng(3);
  std::vector<long long> counts(static_cast<std::size_t>(k));
  for (auto& c : counts) c = static_cast<long long>(rng::uniform_below(eng, 200));
  const std::vector<double> alphas = robust_alphas(counts);
  for (auto _ : state)
    benchmark::DoNotOptimize(worst_case_kl(counts, alphas));
}
BENCHMARK(BM_WorstCaseKl)->Arg(2)->Arg(8)->Arg(64);

void BM_Digamma(benchmark::State& state) {
  double x = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(digamma(x));
    x += 0.37;
    if (x > 500.0) x -= 499.0;
  }
}
BENCHMARK(BM_Digamma);

void BM_ChainLogZ(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const IsingModel model = generate_chain(m, 15);
  for (auto _ : state)
    benchmark::DoNotOptimize(exact_logz_chain(model, 1.0));
}
BENCHMARK(BM_ChainLogZ)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
