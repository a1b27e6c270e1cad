#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "miblearn/tree.hpp"

namespace miblearn {

struct ForestConfig {
  int n_trees = 100;
  int features_per_split = 0;  // 0 = floor(log2(feature_count)) + 1
  std::uint64_t seed = 0;
  TreeConfig base;             // defaults below: unpruned, min_leaf 1
  bool identity_sample = false;  // test hook: replaces the bootstrap by the full set

  ForestConfig() {
    base.min_leaf = 1;
    base.prune = false;
  }
};

/// The features_per_split actually used for a dataset with `feature_count`
/// features under `config`.
int resolved_features_per_split(const ForestConfig& config, std::size_t feature_count);

struct RandomForest {
  std::vector<DecisionTree> trees;
  std::vector<std::vector<bool>> in_bag;  // [tree][row]; rows not marked are that tree's OOB set
  std::vector<std::uint64_t> tree_seeds;  // derived as derive_seed(config.seed, tree index)
  std::vector<std::string> feature_names;
  std::vector<std::string> label_set;
  std::uint64_t schema_fingerprint = 0;
};

/// Bagged ensemble of unpruned gain-ratio trees; every node searches a fresh
/// random subset of features_per_split features. Per-tree seeds are derived
/// from (config.seed, tree index), so results are identical for any training
/// order or thread count. Errors: EmptyDataset.
RandomForest train_forest(const Dataset& train, const ForestConfig& config = {},
                          int n_threads = 1);

/// One hard vote per tree; plurality wins, ties go to the earlier label_set
/// entry. probabilities = votes / n_trees. Errors: SchemaMismatch.
Prediction predict_forest(const RandomForest& forest, const FeatureVector& v);

/// Out-of-bag error: every row is voted on by the trees whose bootstrap
/// excluded it; rows with no such tree are skipped. Errors: SchemaMismatch,
/// NoOobVotes.
double oob_error(const RandomForest& forest, const Dataset& train);

}  // namespace miblearn
