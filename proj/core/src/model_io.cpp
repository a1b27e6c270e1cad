#include "miblearn/model_io.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "miblearn/errors.hpp"

namespace miblearn {

namespace {

using nlohmann::json;

json node_to_json(const TreeNode& node, const std::vector<std::string>& feature_names) {
  json j;
  if (node.leaf) {
    j["counts"] = node.class_counts;
  } else {
    j["feature"] = feature_names[node.test.feature_index];
    j["threshold"] = node.test.threshold;
    j["left"] = node_to_json(*node.left, feature_names);
    j["right"] = node_to_json(*node.right, feature_names);
  }
  return j;
}

std::unique_ptr<TreeNode> node_from_json(const json& j,
                                         const std::vector<std::string>& feature_names,
                                         std::size_t n_labels) {
  auto node = std::make_unique<TreeNode>();
  if (j.contains("counts")) {
    node->class_counts = j.at("counts").get<std::vector<std::size_t>>();
    if (node->class_counts.size() != n_labels) {
      throw Error(ErrorCode::InvalidConfig, "model file: leaf counts do not match label list");
    }
    return node;
  }
  const std::string feature = j.at("feature").get<std::string>();
  std::size_t index = feature_names.size();
  for (std::size_t f = 0; f < feature_names.size(); ++f) {
    if (feature_names[f] == feature) {
      index = f;
      break;
    }
  }
  if (index == feature_names.size()) {
    throw Error(ErrorCode::InvalidConfig, "model file: unknown split feature '" + feature + "'");
  }
  node->leaf = false;
  node->test.feature_index = index;
  node->test.threshold = j.at("threshold").get<double>();
  node->left = node_from_json(j.at("left"), feature_names, n_labels);
  node->right = node_from_json(j.at("right"), feature_names, n_labels);
  // internal counts are derivable; restore them for structural consistency
  node->class_counts.assign(n_labels, 0);
  for (std::size_t i = 0; i < n_labels; ++i) {
    node->class_counts[i] = node->left->class_counts[i] + node->right->class_counts[i];
  }
  return node;
}

json tree_config_to_json(const TreeConfig& c) {
  json j;
  j["min_leaf"] = c.min_leaf;
  j["confidence"] = c.confidence;
  j["rep_prune_fraction"] = c.rep_prune_fraction;
  j["max_depth"] = c.max_depth;
  j["seed"] = c.seed;
  j["prune"] = c.prune;
  return j;
}

TreeConfig tree_config_from_json(const json& j) {
  TreeConfig c;
  c.min_leaf = j.at("min_leaf").get<int>();
  c.confidence = j.at("confidence").get<double>();
  c.rep_prune_fraction = j.at("rep_prune_fraction").get<double>();
  c.max_depth = j.at("max_depth").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.prune = j.at("prune").get<bool>();
  return c;
}

json header_json(LearnerKind kind, const std::vector<std::string>& features,
                 const std::vector<std::string>& labels) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["model_kind"] = to_string(kind);
  j["features"] = features;
  j["labels"] = labels;
  return j;
}

}  // namespace

const std::vector<std::string>& LoadedModel::feature_names() const {
  return kind == LearnerKind::forest ? forest.feature_names : tree.feature_names;
}

const std::vector<std::string>& LoadedModel::label_set() const {
  return kind == LearnerKind::forest ? forest.label_set : tree.label_set;
}

Prediction LoadedModel::predict(const FeatureVector& v) const {
  return kind == LearnerKind::forest ? predict_forest(forest, v) : miblearn::predict(tree, v);
}

void save_model(std::ostream& out, const DecisionTree& tree, LearnerKind kind,
                const TreeConfig& config) {
  if (kind == LearnerKind::forest) {
    throw Error(ErrorCode::InvalidArgument, "single tree cannot be saved as a forest model");
  }
  json j = header_json(kind, tree.feature_names, tree.label_set);
  j["config"] = tree_config_to_json(config);
  j["payload"] = {{"tree", node_to_json(*tree.root, tree.feature_names)}};
  out << j.dump(2) << '\n';
}

void save_model(std::ostream& out, const RandomForest& forest, const ForestConfig& config) {
  json j = header_json(LearnerKind::forest, forest.feature_names, forest.label_set);
  json cfg;
  cfg["n_trees"] = config.n_trees;
  cfg["features_per_split"] = config.features_per_split;
  cfg["seed"] = config.seed;
  cfg["identity_sample"] = config.identity_sample;
  cfg["base"] = tree_config_to_json(config.base);
  j["config"] = std::move(cfg);

  json trees = json::array();
  for (const DecisionTree& tree : forest.trees) {
    trees.push_back(node_to_json(*tree.root, forest.feature_names));
  }
  j["payload"] = {{"trees", std::move(trees)}, {"tree_seeds", forest.tree_seeds}};
  out << j.dump(2) << '\n';
}

LoadedModel load_model(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("model file: ") + e.what());
  }
  try {
    LoadedModel model;
    model.format_version = j.at("format_version").get<int>();
    if (model.format_version != kModelFormatVersion) {
      throw Error(ErrorCode::InvalidConfig,
                  "model file: unsupported format_version " +
                      std::to_string(model.format_version));
    }
    const std::string kind_token = j.at("model_kind").get<std::string>();
    const auto kind = learner_kind_from(kind_token);
    if (!kind) {
      throw Error(ErrorCode::InvalidConfig, "model file: unknown model_kind '" + kind_token + "'");
    }
    model.kind = *kind;
    const auto features = j.at("features").get<std::vector<std::string>>();
    const auto labels = j.at("labels").get<std::vector<std::string>>();
    MibSchema schema;
    schema.feature_names = features;

    if (model.kind == LearnerKind::forest) {
      const json& cfg = j.at("config");
      model.forest_config.n_trees = cfg.at("n_trees").get<int>();
      model.forest_config.features_per_split = cfg.at("features_per_split").get<int>();
      model.forest_config.seed = cfg.at("seed").get<std::uint64_t>();
      model.forest_config.identity_sample = cfg.at("identity_sample").get<bool>();
      model.forest_config.base = tree_config_from_json(cfg.at("base"));

      model.forest.feature_names = features;
      model.forest.label_set = labels;
      model.forest.schema_fingerprint = schema.fingerprint();
      model.forest.tree_seeds =
          j.at("payload").at("tree_seeds").get<std::vector<std::uint64_t>>();
      for (const json& jt : j.at("payload").at("trees")) {
        DecisionTree tree;
        tree.feature_names = features;
        tree.label_set = labels;
        tree.schema_fingerprint = model.forest.schema_fingerprint;
        tree.root = node_from_json(jt, features, labels.size());
        model.forest.trees.push_back(std::move(tree));
      }
      if (model.forest.trees.empty()) {
        throw Error(ErrorCode::InvalidConfig, "model file: forest has no trees");
      }
      // bootstrap bitmaps reference training rows and are not serialized
    } else {
      model.tree_config = tree_config_from_json(j.at("config"));
      model.tree.feature_names = features;
      model.tree.label_set = labels;
      model.tree.schema_fingerprint = schema.fingerprint();
      model.tree.root = node_from_json(j.at("payload").at("tree"), features, labels.size());
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("model file: ") + e.what());
  }
}

}  // namespace miblearn
