#include <benchmark/benchmark.h>

#include "miblearn/eval.hpp"
#include "miblearn/featsel.hpp"
#include "miblearn/forest.hpp"
#include "miblearn/synth.hpp"
#include "miblearn/tree.hpp"

namespace {

using namespace miblearn;

const Dataset& scenario_1400() {
  static const Dataset data = generate(default_scenario());
  return data;
}

const Dataset& scenario_350() {
  static const Dataset data = [] {
    ScenarioConfig config = default_scenario();
    config.rows_per_class = 50;
    return generate(config);
  }();
  return data;
}

void BM_Generate1400(benchmark::State& state) {
  const ScenarioConfig config = default_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate(config));
  }
}
BENCHMARK(BM_Generate1400);

void BM_GrowC45(benchmark::State& state) {
  const Dataset& data = scenario_1400();
  for (auto _ : state) {
    benchmark::DoNotOptimize(grow_c45(data));
  }
}
BENCHMARK(BM_GrowC45);

void BM_GrowRep(benchmark::State& state) {
  const Dataset& data = scenario_1400();
  TreeConfig config;
  config.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grow_rep(data, config));
  }
}
BENCHMARK(BM_GrowRep);

void BM_TrainForest(benchmark::State& state) {
  const Dataset& data = scenario_1400();
  ForestConfig config;
  config.n_trees = static_cast<int>(state.range(0));
  config.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_forest(data, config));
  }
}
BENCHMARK(BM_TrainForest)->Arg(10)->Arg(100);

void BM_PredictForest(benchmark::State& state) {
  const Dataset& data = scenario_1400();
  ForestConfig config;
  config.seed = 1;
  const RandomForest forest = train_forest(data, config);
  std::size_t r = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_forest(forest, data.features[r]));
    r = (r + 1) % data.row_count();
  }
}
BENCHMARK(BM_PredictForest);

void BM_InfoGain(benchmark::State& state) {
  const Dataset& data = scenario_1400();
  for (auto _ : state) {
    benchmark::DoNotOptimize(info_gain_scores(data));
  }
}
BENCHMARK(BM_InfoGain);

void BM_Relieff(benchmark::State& state) {
  const Dataset& data = state.range(0) == 350 ? scenario_350() : scenario_1400();
  for (auto _ : state) {
    benchmark::DoNotOptimize(relieff_scores(data));
  }
}
BENCHMARK(BM_Relieff)->Arg(350)->Arg(1400);

void BM_CrossValidateC45(benchmark::State& state) {
  const Dataset& data = scenario_1400();
  LearnerSpec spec;
  spec.kind = LearnerKind::c45;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cross_validate(spec, data, 10, 42));
  }
}
BENCHMARK(BM_CrossValidateC45);

}  // namespace

BENCHMARK_MAIN();
