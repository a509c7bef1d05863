#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "slt/distribution.hpp"
#include "slt/experiments.hpp"
#include "slt/learners.hpp"
#include "slt/shattering.hpp"

namespace {

using namespace slt;

DataDistribution noisy_threshold() {
  return DataDistribution(UniformBox{{0.0}, {1.0}}, Hypothesis(Threshold{0.3, Direction::Up}), 0.1);
}

// ERM over a threshold grid; cost is class size times sample size.
void BM_ErmThresholds(benchmark::State& state) {
  const auto grid = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const auto members = enumerate_class(HypothesisClass(ThresholdFamily{}),
                                       Discretization{Discretization::linspace(0, 1, grid)});
  const auto S = draw_sample(noisy_threshold(), m, SeedSpec{1, "bench", 0});
  for (auto _ : state) benchmark::DoNotOptimize(erm(members, S));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * grid * m));
}
BENCHMARK(BM_ErmThresholds)->Args({101, 100})->Args({1001, 1000})->Args({10001, 1000});

void BM_ErmRectangles(benchmark::State& state) {
  const auto members = enumerate_class(HypothesisClass(RectangleFamily{2}),
                                       Discretization{Discretization::linspace(0, 1, state.range(0))});
  const DataDistribution D(UniformBox{{0, 0}, {1, 1}}, Hypothesis(Rectangle{{0.2, 0.3}, {0.7, 0.9}}), 0.05);
  const auto S = draw_sample(D, 500, SeedSpec{2, "bench", 0});
  for (auto _ : state) benchmark::DoNotOptimize(erm(members, S));
  state.counters["members"] = static_cast<double>(members.size());
}
BENCHMARK(BM_ErmRectangles)->Arg(6)->Arg(11);

void BM_VcDimensionRectangles(benchmark::State& state) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Instance> pool;
  for (long i = 0; i < state.range(0); ++i) pool.push_back(Instance{u(g), u(g)});
  const auto members = enumerate_class(HypothesisClass(RectangleFamily{2}),
                                       Discretization{Discretization::linspace(0, 1, 21)});
  for (auto _ : state) benchmark::DoNotOptimize(vc_dimension(members, pool));
}
BENCHMARK(BM_VcDimensionRectangles)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SineWitness(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sine_shatter_witness(k));
}
BENCHMARK(BM_SineWitness)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_Learnability(benchmark::State& state) {
  LearnabilityConfig cfg{.cls = HypothesisClass(ThresholdFamily{}),
                         .grid = Discretization{Discretization::linspace(0, 1, 101)},
                         .distribution = noisy_threshold()};
  cfg.m = 500;
  cfg.trials = 200;
  cfg.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_learnability(cfg));
}
BENCHMARK(BM_Learnability)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_NflExact(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(nfl_exact(m, NflLearner::ErmAllFunctions));
}
BENCHMARK(BM_NflExact)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
