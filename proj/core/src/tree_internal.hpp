#pragma once

// Shared tree-induction machinery for the single-tree learners and the
// forest. Not installed; everything here is an implementation detail.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "miblearn/dataset.hpp"
#include "miblearn/rng.hpp"
#include "miblearn/tree.hpp"

namespace miblearn::detail {

/// Label id per row, positions into the sorted label_set.
std::vector<int> label_ids(const Dataset& data, const std::vector<std::string>& label_set);

/// Midpoint of two consecutive distinct values, clamped so that rows with
/// value <= midpoint are exactly the rows with value <= a even when the
/// floating midpoint rounds up to b.
inline double split_midpoint(double a, double b) {
  const double mid = (a + b) / 2.0;
  return mid < b ? mid : a;
}

/// Entropy in bits of a count vector; labels iterated in index order.
double entropy_of_counts(const std::vector<std::size_t>& counts, std::size_t total);

/// Exhaustive sweep over one feature's candidate thresholds within `rows`.
std::optional<SplitCandidate> scan_feature(const Dataset& data,
                                           const std::vector<std::size_t>& rows,
                                           const std::vector<int>& ids, std::size_t n_labels,
                                           std::size_t feature, SplitCriterion criterion,
                                           int min_leaf);

struct GrowParams {
  SplitCriterion criterion = SplitCriterion::gain_ratio;
  bool mean_gain_guard = false;  // restrict to features with gain >= mean positive gain
  int min_leaf = 2;
  int max_depth = -1;  // negative = unlimited
  // When set, every node searches a fresh random subset of this many features.
  Rng* feature_rng = nullptr;
  int features_per_split = 0;
};

std::unique_ptr<TreeNode> grow_tree(const Dataset& data, const std::vector<std::size_t>& rows,
                                    const std::vector<int>& ids, std::size_t n_labels,
                                    const GrowParams& params);

}  // namespace miblearn::detail
