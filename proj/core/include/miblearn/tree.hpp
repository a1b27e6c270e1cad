#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "miblearn/dataset.hpp"

namespace miblearn {

/// Numeric binary test. Rows with value <= threshold go left.
struct SplitTest {
  std::size_t feature_index = 0;
  double threshold = 0.0;
};

struct TreeNode {
  bool leaf = true;
  SplitTest test;  // meaningful only when !leaf
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  std::vector<std::size_t> class_counts;  // training counts, aligned to label_set

  std::size_t total() const;
  /// Index of the majority class; ties go to the smaller label index.
  std::size_t majority() const;
};

struct TreeConfig {
  int min_leaf = 2;
  double confidence = 0.25;  // pessimistic-pruning confidence (gain-ratio learner)
  double rep_prune_fraction = 1.0 / 3.0;
  int max_depth = -1;  // negative = unlimited; 0 grows a single leaf
  std::uint64_t seed = 0;
  bool prune = true;
};

struct DecisionTree {
  std::vector<std::string> feature_names;
  std::uint64_t schema_fingerprint = 0;
  std::vector<std::string> label_set;  // sorted; fixes tie-breaks and output order
  std::unique_ptr<TreeNode> root;

  std::size_t node_count() const;
  std::size_t leaf_count() const;
  int depth() const;  // 0 for a single leaf
};

enum class SplitCriterion { gain, gain_ratio };

struct SplitCandidate {
  double threshold = 0.0;
  double score = 0.0;  // value of the requested criterion at `threshold`
  double gain = 0.0;   // plain information gain at `threshold`
};

/// Shannon entropy of a class-count map, in bits. Errors: EmptyCounts.
double entropy(const std::map<std::string, std::size_t>& class_counts);

/// Best threshold for one feature over the whole dataset. Candidates are
/// midpoints between consecutive distinct sorted values; both sides must keep
/// at least min_leaf rows. Returns nullopt when no candidate qualifies or the
/// best score is <= 0. Ties go to the smaller threshold.
std::optional<SplitCandidate> best_split(const Dataset& data, std::size_t feature_index,
                                         SplitCriterion criterion, int min_leaf);

/// Gain-ratio learner: top-down induction choosing, at every node, the
/// (feature, threshold) with the highest gain ratio among features whose
/// plain gain reaches the mean gain of all positive-gain candidates; then
/// pessimistic subtree-replacement pruning at config.confidence (unless
/// config.prune is off). Deterministic. Errors: EmptyDataset.
DecisionTree grow_c45(const Dataset& train, const TreeConfig& config = {});

/// Record of a reduced-error pruning pass, for inspection.
struct RepPruneTrace {
  struct Step {
    std::size_t subtree_errors = 0;  // prune-set errors of the replaced subtree
    std::size_t leaf_errors = 0;     // prune-set errors of the replacement leaf
  };
  std::vector<Step> steps;  // one entry per applied replacement
  std::size_t nodes_before = 0;
  std::size_t nodes_after = 0;
  std::size_t prune_errors_before = 0;
  std::size_t prune_errors_after = 0;
};

/// The stratified grow/prune partition used by grow_rep: per class, rows are
/// shuffled with `seed` and floor(count * prune_fraction) of them go to the
/// prune set. Errors: ClassTooSmall when the prune set would be empty.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> rep_grow_prune_split(
    const Dataset& data, double prune_fraction, std::uint64_t seed);

/// Reduced-error-pruning learner: grows a plain information-gain tree on the
/// grow partition, then bottom-up replaces any internal node by its majority
/// leaf whenever that does not increase error on the prune partition (ties
/// prune). Errors: EmptyDataset, ClassTooSmall.
DecisionTree grow_rep(const Dataset& train, const TreeConfig& config = {},
                      RepPruneTrace* trace = nullptr);

struct Prediction {
  std::string label;
  std::vector<double> probabilities;  // aligned to the model's label_set
};

/// Routes v to a leaf; probabilities are the leaf's relative class
/// frequencies, label the argmax (ties to the earlier label_set entry).
/// Errors: SchemaMismatch when v's arity differs from the model's.
Prediction predict(const DecisionTree& tree, const FeatureVector& v);

}  // namespace miblearn
