#pragma once

#include <iosfwd>

#include "miblearn/learner.hpp"

namespace miblearn {

inline constexpr int kModelFormatVersion = 1;

/// A deserialized model file: the learner kind, its config echo, and the
/// payload (one tree, or a forest).
struct LoadedModel {
  int format_version = kModelFormatVersion;
  LearnerKind kind = LearnerKind::c45;
  TreeConfig tree_config;      // echo, c45 / rep
  ForestConfig forest_config;  // echo, forest
  DecisionTree tree;           // valid when kind != forest
  RandomForest forest;         // valid when kind == forest

  const std::vector<std::string>& feature_names() const;
  const std::vector<std::string>& label_set() const;
  Prediction predict(const FeatureVector& v) const;
};

/// Versioned JSON documents: nested node records with feature names,
/// thresholds and leaf counts. save then load reproduces identical
/// predictions on any input.
void save_model(std::ostream& out, const DecisionTree& tree, LearnerKind kind,
                const TreeConfig& config);
void save_model(std::ostream& out, const RandomForest& forest, const ForestConfig& config);
LoadedModel load_model(std::istream& in);

}  // namespace miblearn
