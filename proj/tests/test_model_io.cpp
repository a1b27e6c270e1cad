#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "miblearn/errors.hpp"
#include "miblearn/model_io.hpp"
#include "miblearn/rng.hpp"
#include "miblearn/synth.hpp"

using namespace miblearn;

namespace {

Dataset small_scenario_data(std::uint64_t seed) {
  ScenarioConfig config = default_scenario();
  config.rows_per_class = 25;
  config.seed = seed;
  return generate(config);
}

std::vector<FeatureVector> probes(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FeatureVector> out;
  for (std::size_t i = 0; i < count; ++i) {
    FeatureVector v(8);
    for (double& x : v) x = rng.uniform01() * 50000.0;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST_CASE("tree model files round-trip predictions exactly") {
  const Dataset data = small_scenario_data(3);
  TreeConfig config;
  config.seed = 17;
  for (const LearnerKind kind : {LearnerKind::c45, LearnerKind::rep}) {
    const DecisionTree tree =
        kind == LearnerKind::c45 ? grow_c45(data, config) : grow_rep(data, config);
    std::ostringstream out;
    save_model(out, tree, kind, config);
    std::istringstream in(out.str());
    const LoadedModel model = load_model(in);
    CHECK(model.kind == kind);
    CHECK(model.feature_names() == tree.feature_names);
    CHECK(model.label_set() == tree.label_set);
    CHECK(model.tree_config.seed == 17);
    for (const FeatureVector& v : probes(50, 1)) {
      const Prediction a = predict(tree, v);
      const Prediction b = model.predict(v);
      CHECK(a.label == b.label);
      CHECK(a.probabilities == b.probabilities);
    }
  }
}

TEST_CASE("forest model files round-trip predictions exactly") {
  const Dataset data = small_scenario_data(4);
  ForestConfig config;
  config.n_trees = 10;
  config.seed = 23;
  const RandomForest forest = train_forest(data, config);
  std::ostringstream out;
  save_model(out, forest, config);
  std::istringstream in(out.str());
  const LoadedModel model = load_model(in);
  CHECK(model.kind == LearnerKind::forest);
  CHECK(model.forest.trees.size() == 10);
  CHECK(model.forest.tree_seeds == forest.tree_seeds);
  CHECK(model.forest_config.n_trees == 10);
  for (const FeatureVector& v : probes(50, 2)) {
    const Prediction a = predict_forest(forest, v);
    const Prediction b = model.predict(v);
    CHECK(a.label == b.label);
    CHECK(a.probabilities == b.probabilities);
  }
}

TEST_CASE("serialization is byte-stable, and reload-save is the identity") {
  const Dataset data = small_scenario_data(5);
  TreeConfig config;
  const DecisionTree tree = grow_c45(data, config);
  std::ostringstream a, b;
  save_model(a, tree, LearnerKind::c45, config);
  save_model(b, tree, LearnerKind::c45, config);
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  const LoadedModel model = load_model(in);
  std::ostringstream again;
  save_model(again, model.tree, model.kind, model.tree_config);
  CHECK(again.str() == a.str());
}

TEST_CASE("model files reject unknown versions and malformed payloads") {
  const Dataset data = small_scenario_data(6);
  const TreeConfig config;
  const DecisionTree tree = grow_c45(data, config);
  std::ostringstream out;
  save_model(out, tree, LearnerKind::c45, config);

  SUBCASE("bad version") {
    std::string text = out.str();
    const auto pos = text.find("\"format_version\": 1");
    text.replace(pos, std::string("\"format_version\": 1").size(), "\"format_version\": 99");
    std::istringstream in(text);
    try {
      load_model(in);
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidConfig);
    }
  }
  SUBCASE("not JSON at all") {
    std::istringstream in("not json");
    CHECK_THROWS_AS(load_model(in), Error);
  }
  SUBCASE("unknown split feature") {
    std::string text = out.str();
    const auto pos = text.find("\"feature\": \"");
    if (pos != std::string::npos) {
      text.replace(pos, std::string("\"feature\": \"").size(), "\"feature\": \"zz");
      std::istringstream in(text);
      CHECK_THROWS_AS(load_model(in), Error);
    }
  }
}

TEST_CASE("a loaded forest refuses oob_error without its bitmaps") {
  const Dataset data = small_scenario_data(7);
  ForestConfig config;
  config.n_trees = 3;
  const RandomForest forest = train_forest(data, config);
  std::ostringstream out;
  save_model(out, forest, config);
  std::istringstream in(out.str());
  const LoadedModel model = load_model(in);
  CHECK_THROWS_AS(oob_error(model.forest, data), Error);
}
