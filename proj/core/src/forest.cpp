#include "miblearn/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "miblearn/errors.hpp"
#include "miblearn/rng.hpp"
#include "tree_internal.hpp"

namespace miblearn {

namespace {

void validate_forest_config(const ForestConfig& config, std::size_t feature_count) {
  if (config.n_trees < 1) {
    throw Error(ErrorCode::InvalidArgument, "n_trees must be at least 1");
  }
  if (config.features_per_split < 0 ||
      static_cast<std::size_t>(config.features_per_split) > feature_count) {
    throw Error(ErrorCode::InvalidArgument,
                "features_per_split must lie in [1, feature_count] (or 0 for the default)");
  }
  if (config.base.min_leaf < 1) {
    throw Error(ErrorCode::InvalidArgument, "min_leaf must be at least 1");
  }
}

}  // namespace

int resolved_features_per_split(const ForestConfig& config, std::size_t feature_count) {
  if (config.features_per_split > 0) return config.features_per_split;
  const int k = static_cast<int>(std::floor(std::log2(static_cast<double>(feature_count)))) + 1;
  return std::clamp(k, 1, static_cast<int>(feature_count));
}

RandomForest train_forest(const Dataset& train, const ForestConfig& config, int n_threads) {
  if (train.row_count() == 0) throw Error(ErrorCode::EmptyDataset, "training set is empty");
  if (train.feature_count() == 0) {
    throw Error(ErrorCode::InvalidArgument, "training set has no features");
  }
  validate_forest_config(config, train.feature_count());

  const std::size_t n_rows = train.row_count();
  const int fps = resolved_features_per_split(config, train.feature_count());

  RandomForest forest;
  forest.feature_names = train.schema.feature_names;
  forest.schema_fingerprint = train.schema.fingerprint();
  forest.label_set = distinct_labels(train);
  forest.trees.resize(static_cast<std::size_t>(config.n_trees));
  forest.in_bag.resize(static_cast<std::size_t>(config.n_trees));
  forest.tree_seeds.resize(static_cast<std::size_t>(config.n_trees));
  const std::vector<int> ids = detail::label_ids(train, forest.label_set);

  auto build_tree = [&](std::size_t t) {
    const std::uint64_t tree_seed = derive_seed(config.seed, t);
    forest.tree_seeds[t] = tree_seed;
    Rng rng(tree_seed);

    std::vector<std::size_t> rows;
    std::vector<bool> in_bag(n_rows, false);
    if (config.identity_sample) {
      rows.resize(n_rows);
      for (std::size_t r = 0; r < n_rows; ++r) rows[r] = r;
      in_bag.assign(n_rows, true);
    } else {
      rows.reserve(n_rows);
      for (std::size_t i = 0; i < n_rows; ++i) {
        const std::size_t r = static_cast<std::size_t>(rng.bounded(n_rows));
        rows.push_back(r);
        in_bag[r] = true;
      }
    }

    detail::GrowParams params;
    params.criterion = SplitCriterion::gain_ratio;
    params.mean_gain_guard = true;
    params.min_leaf = config.base.min_leaf;
    params.max_depth = config.base.max_depth;
    params.feature_rng = &rng;
    params.features_per_split = fps;

    DecisionTree& tree = forest.trees[t];
    tree.feature_names = forest.feature_names;
    tree.schema_fingerprint = forest.schema_fingerprint;
    tree.label_set = forest.label_set;
    tree.root = detail::grow_tree(train, rows, ids, forest.label_set.size(), params);
    forest.in_bag[t] = std::move(in_bag);
  };

  int threads = n_threads;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, config.n_trees);

  if (threads == 1) {
    for (std::size_t t = 0; t < forest.trees.size(); ++t) build_tree(t);
  } else {
    // Trees write only their own slot, so any schedule gives the same forest.
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t t = next.fetch_add(1);
          if (t >= forest.trees.size()) return;
          try {
            build_tree(t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  return forest;
}

Prediction predict_forest(const RandomForest& forest, const FeatureVector& v) {
  if (v.size() != forest.feature_names.size()) {
    throw Error(ErrorCode::SchemaMismatch,
                "vector has " + std::to_string(v.size()) + " features, model expects " +
                    std::to_string(forest.feature_names.size()));
  }
  std::vector<std::size_t> votes(forest.label_set.size(), 0);
  for (const DecisionTree& tree : forest.trees) {
    const TreeNode* node = tree.root.get();
    while (!node->leaf) {
      node = v[node->test.feature_index] <= node->test.threshold ? node->left.get()
                                                                 : node->right.get();
    }
    ++votes[node->majority()];
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < votes.size(); ++i) {
    if (votes[i] > votes[best]) best = i;
  }
  Prediction p;
  p.label = forest.label_set[best];
  p.probabilities.resize(votes.size());
  for (std::size_t i = 0; i < votes.size(); ++i) {
    p.probabilities[i] =
        static_cast<double>(votes[i]) / static_cast<double>(forest.trees.size());
  }
  return p;
}

double oob_error(const RandomForest& forest, const Dataset& train) {
  if (train.schema.fingerprint() != forest.schema_fingerprint) {
    throw Error(ErrorCode::SchemaMismatch, "dataset schema differs from the forest's");
  }
  if (forest.in_bag.empty() || forest.in_bag[0].size() != train.row_count()) {
    throw Error(ErrorCode::SchemaMismatch,
                "forest carries no bootstrap bitmaps for this training set");
  }
  const std::vector<int> ids = detail::label_ids(train, forest.label_set);
  std::size_t evaluated = 0;
  std::size_t errors = 0;
  std::vector<std::size_t> votes(forest.label_set.size());
  for (std::size_t r = 0; r < train.row_count(); ++r) {
    std::fill(votes.begin(), votes.end(), 0);
    bool any = false;
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
      if (forest.in_bag[t][r]) continue;
      const TreeNode* node = forest.trees[t].root.get();
      while (!node->leaf) {
        node = train.features[r][node->test.feature_index] <= node->test.threshold
                   ? node->left.get()
                   : node->right.get();
      }
      ++votes[node->majority()];
      any = true;
    }
    if (!any) continue;
    std::size_t best = 0;
    for (std::size_t i = 1; i < votes.size(); ++i) {
      if (votes[i] > votes[best]) best = i;
    }
    ++evaluated;
    if (best != static_cast<std::size_t>(ids[r])) ++errors;
  }
  if (evaluated == 0) {
    throw Error(ErrorCode::NoOobVotes, "every row is in-bag for every tree");
  }
  return static_cast<double>(errors) / static_cast<double>(evaluated);
}

}  // namespace miblearn
