#include "miblearn/tree.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "miblearn/errors.hpp"
#include "miblearn/rng.hpp"
#include "tree_internal.hpp"

namespace miblearn {

namespace detail {

std::vector<int> label_ids(const Dataset& data, const std::vector<std::string>& label_set) {
  std::vector<int> ids(data.row_count());
  for (std::size_t r = 0; r < data.row_count(); ++r) {
    const auto it = std::lower_bound(label_set.begin(), label_set.end(), data.labels[r]);
    ids[r] = static_cast<int>(it - label_set.begin());
  }
  return ids;
}

double entropy_of_counts(const std::vector<std::size_t>& counts, std::size_t total) {
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::optional<SplitCandidate> scan_feature(const Dataset& data,
                                           const std::vector<std::size_t>& rows,
                                           const std::vector<int>& ids, std::size_t n_labels,
                                           std::size_t feature, SplitCriterion criterion,
                                           int min_leaf) {
  const std::size_t m = rows.size();
  if (m < 2) return std::nullopt;

  std::vector<std::pair<double, int>> vals;
  vals.reserve(m);
  for (std::size_t r : rows) vals.emplace_back(data.features[r][feature], ids[r]);
  std::sort(vals.begin(), vals.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::size_t> total(n_labels, 0);
  for (const auto& [v, id] : vals) ++total[static_cast<std::size_t>(id)];
  const double h_parent = entropy_of_counts(total, m);
  const double dm = static_cast<double>(m);
  const std::size_t need = static_cast<std::size_t>(min_leaf);

  std::vector<std::size_t> left(n_labels, 0);
  SplitCandidate best;
  bool found = false;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    ++left[static_cast<std::size_t>(vals[i].second)];
    if (vals[i].first == vals[i + 1].first) continue;
    const std::size_t nl = i + 1;
    const std::size_t nr = m - nl;
    if (nl < need || nr < need) continue;

    double hl = 0.0, hr = 0.0;
    for (std::size_t l = 0; l < n_labels; ++l) {
      if (left[l]) {
        const double p = static_cast<double>(left[l]) / static_cast<double>(nl);
        hl -= p * std::log2(p);
      }
      const std::size_t rc = total[l] - left[l];
      if (rc) {
        const double p = static_cast<double>(rc) / static_cast<double>(nr);
        hr -= p * std::log2(p);
      }
    }
    const double wl = static_cast<double>(nl) / dm;
    const double wr = static_cast<double>(nr) / dm;
    const double gain = h_parent - wl * hl - wr * hr;
    double score = gain;
    if (criterion == SplitCriterion::gain_ratio) {
      const double split_info = -(wl * std::log2(wl) + wr * std::log2(wr));
      score = gain / split_info;
    }
    if (!found || score > best.score) {
      best.threshold = split_midpoint(vals[i].first, vals[i + 1].first);
      best.score = score;
      best.gain = gain;
      found = true;
    }
  }
  if (!found || best.score <= 0.0) return std::nullopt;
  return best;
}

namespace {

struct ChosenSplit {
  std::size_t feature = 0;
  SplitCandidate split;
};

std::optional<ChosenSplit> choose_split(const Dataset& data,
                                        const std::vector<std::size_t>& rows,
                                        const std::vector<int>& ids, std::size_t n_labels,
                                        const GrowParams& params,
                                        const std::vector<std::size_t>& features) {
  std::vector<ChosenSplit> candidates;
  for (std::size_t f : features) {
    auto c = scan_feature(data, rows, ids, n_labels, f, params.criterion, params.min_leaf);
    if (c) candidates.push_back({f, *c});
  }
  if (candidates.empty()) return std::nullopt;

  const std::size_t count = candidates.size();
  std::vector<bool> eligible(count, true);
  if (params.mean_gain_guard && count > 1) {
    double mean_gain = 0.0;
    for (const ChosenSplit& c : candidates) mean_gain += c.split.gain;
    mean_gain /= static_cast<double>(count);
    // The epsilon absorbs rounding in the mean so the max-gain feature always
    // stays eligible.
    for (std::size_t i = 0; i < count; ++i) {
      eligible[i] = candidates[i].split.gain + 1e-12 >= mean_gain;
    }
  }
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < count; ++i) {
    if (!eligible[i]) continue;
    if (!pick || candidates[i].split.score > candidates[*pick].split.score) pick = i;
  }
  if (!pick) return std::nullopt;
  return candidates[*pick];
}

std::unique_ptr<TreeNode> grow_node(const Dataset& data, const std::vector<std::size_t>& rows,
                                    const std::vector<int>& ids, std::size_t n_labels,
                                    const GrowParams& params, int depth) {
  auto node = std::make_unique<TreeNode>();
  node->class_counts.assign(n_labels, 0);
  for (std::size_t r : rows) ++node->class_counts[static_cast<std::size_t>(ids[r])];

  std::size_t present = 0;
  for (std::size_t c : node->class_counts) present += (c > 0);
  if (present <= 1) return node;
  if (rows.size() < 2 * static_cast<std::size_t>(params.min_leaf)) return node;
  if (params.max_depth >= 0 && depth >= params.max_depth) return node;

  std::vector<std::size_t> features;
  if (params.feature_rng) {
    features = params.feature_rng->sample_without_replacement(
        data.feature_count(), static_cast<std::size_t>(params.features_per_split));
    std::sort(features.begin(), features.end());  // keep the earlier-index tie-break
  } else {
    features.resize(data.feature_count());
    for (std::size_t f = 0; f < features.size(); ++f) features[f] = f;
  }

  const auto chosen = choose_split(data, rows, ids, n_labels, params, features);
  if (!chosen) return node;

  std::vector<std::size_t> left_rows, right_rows;
  for (std::size_t r : rows) {
    if (data.features[r][chosen->feature] <= chosen->split.threshold) {
      left_rows.push_back(r);
    } else {
      right_rows.push_back(r);
    }
  }
  node->leaf = false;
  node->test = {chosen->feature, chosen->split.threshold};
  node->left = grow_node(data, left_rows, ids, n_labels, params, depth + 1);
  node->right = grow_node(data, right_rows, ids, n_labels, params, depth + 1);
  return node;
}

}  // namespace

std::unique_ptr<TreeNode> grow_tree(const Dataset& data, const std::vector<std::size_t>& rows,
                                    const std::vector<int>& ids, std::size_t n_labels,
                                    const GrowParams& params) {
  return grow_node(data, rows, ids, n_labels, params, 0);
}

}  // namespace detail

namespace {

void validate_tree_config(const TreeConfig& config) {
  if (config.min_leaf < 1) {
    throw Error(ErrorCode::InvalidArgument, "min_leaf must be at least 1");
  }
  if (!(config.confidence > 0.0 && config.confidence < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "confidence must lie in (0, 1)");
  }
  if (!(config.rep_prune_fraction > 0.0 && config.rep_prune_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "rep_prune_fraction must lie in (0, 1)");
  }
}

// Inverse standard normal CDF: Acklam's rational approximation plus one
// Halley refinement against erfc. Ample for confidence bounds.
double inverse_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * 3.141592653589793) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

// Extra errors granted by the one-sided upper confidence bound on a leaf's
// error rate: the normal approximation to the binomial with 0.5 continuity
// correction, with the exact-binomial special case for e < 1.
double added_errors(double n, double e, double cf) {
  if (e < 1.0) {
    const double base = n * (1.0 - std::pow(cf, 1.0 / n));
    if (e == 0.0) return base;
    return base + e * (added_errors(n, 1.0, cf) - base);
  }
  if (e + 0.5 >= n) return std::max(n - e, 0.0);
  const double z = inverse_normal_cdf(1.0 - cf);
  const double f = (e + 0.5) / n;
  const double r =
      (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
      (1.0 + z * z / n);
  return r * n - e;
}

double pessimistic_errors(double n, double e, double cf) { return e + added_errors(n, e, cf); }

// Bottom-up subtree replacement: a node becomes a leaf whenever the
// pessimistic error of the leaf does not exceed the summed pessimistic error
// of its (already pruned) children.
double prune_pessimistic(TreeNode& node, double cf) {
  const double n = static_cast<double>(node.total());
  const double e = n - static_cast<double>(node.class_counts[node.majority()]);
  if (node.leaf) return pessimistic_errors(n, e, cf);
  const double subtree = prune_pessimistic(*node.left, cf) + prune_pessimistic(*node.right, cf);
  const double as_leaf = pessimistic_errors(n, e, cf);
  if (as_leaf <= subtree) {
    node.leaf = true;
    node.left.reset();
    node.right.reset();
    return as_leaf;
  }
  return subtree;
}

std::size_t count_nodes(const TreeNode& node) {
  if (node.leaf) return 1;
  return 1 + count_nodes(*node.left) + count_nodes(*node.right);
}

std::size_t count_leaves(const TreeNode& node) {
  if (node.leaf) return 1;
  return count_leaves(*node.left) + count_leaves(*node.right);
}

int node_depth(const TreeNode& node) {
  if (node.leaf) return 0;
  return 1 + std::max(node_depth(*node.left), node_depth(*node.right));
}

// Prune-set errors of a subtree, replacing nodes by leaves whenever that does
// not increase the error (ties prune). Returns the post-decision error.
std::size_t rep_prune(TreeNode& node, const Dataset& data, const std::vector<int>& ids,
                      const std::vector<std::size_t>& rows, RepPruneTrace* trace) {
  const std::size_t maj = node.majority();
  std::size_t leaf_errors = 0;
  for (std::size_t r : rows) {
    if (static_cast<std::size_t>(ids[r]) != maj) ++leaf_errors;
  }
  if (node.leaf) return leaf_errors;

  std::vector<std::size_t> left_rows, right_rows;
  for (std::size_t r : rows) {
    if (data.features[r][node.test.feature_index] <= node.test.threshold) {
      left_rows.push_back(r);
    } else {
      right_rows.push_back(r);
    }
  }
  const std::size_t subtree_errors = rep_prune(*node.left, data, ids, left_rows, trace) +
                                     rep_prune(*node.right, data, ids, right_rows, trace);
  if (leaf_errors <= subtree_errors) {
    if (trace) trace->steps.push_back({subtree_errors, leaf_errors});
    node.leaf = true;
    node.left.reset();
    node.right.reset();
    return leaf_errors;
  }
  return subtree_errors;
}

std::size_t subtree_errors_on(const TreeNode& node, const Dataset& data,
                              const std::vector<int>& ids,
                              const std::vector<std::size_t>& rows) {
  std::size_t errors = 0;
  for (std::size_t r : rows) {
    const TreeNode* cur = &node;
    while (!cur->leaf) {
      cur = data.features[r][cur->test.feature_index] <= cur->test.threshold
                ? cur->left.get()
                : cur->right.get();
    }
    if (static_cast<std::size_t>(ids[r]) != cur->majority()) ++errors;
  }
  return errors;
}

}  // namespace

std::size_t TreeNode::total() const {
  std::size_t t = 0;
  for (std::size_t c : class_counts) t += c;
  return t;
}

std::size_t TreeNode::majority() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < class_counts.size(); ++i) {
    if (class_counts[i] > class_counts[best]) best = i;
  }
  return best;
}

std::size_t DecisionTree::node_count() const { return root ? count_nodes(*root) : 0; }
std::size_t DecisionTree::leaf_count() const { return root ? count_leaves(*root) : 0; }
int DecisionTree::depth() const { return root ? node_depth(*root) : 0; }

double entropy(const std::map<std::string, std::size_t>& class_counts) {
  std::size_t total = 0;
  for (const auto& [label, c] : class_counts) total += c;
  if (total == 0) throw Error(ErrorCode::EmptyCounts, "entropy of an empty count set");
  double h = 0.0;
  for (const auto& [label, c] : class_counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::optional<SplitCandidate> best_split(const Dataset& data, std::size_t feature_index,
                                         SplitCriterion criterion, int min_leaf) {
  if (feature_index >= data.feature_count()) {
    throw Error(ErrorCode::UnknownFeature,
                "feature index " + std::to_string(feature_index) + " out of range");
  }
  if (min_leaf < 1) throw Error(ErrorCode::InvalidArgument, "min_leaf must be at least 1");
  const std::vector<std::string> label_set = distinct_labels(data);
  const std::vector<int> ids = detail::label_ids(data, label_set);
  std::vector<std::size_t> rows(data.row_count());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
  return detail::scan_feature(data, rows, ids, label_set.size(), feature_index, criterion,
                              min_leaf);
}

DecisionTree grow_c45(const Dataset& train, const TreeConfig& config) {
  if (train.row_count() == 0) throw Error(ErrorCode::EmptyDataset, "training set is empty");
  validate_tree_config(config);

  DecisionTree tree;
  tree.feature_names = train.schema.feature_names;
  tree.schema_fingerprint = train.schema.fingerprint();
  tree.label_set = distinct_labels(train);
  const std::vector<int> ids = detail::label_ids(train, tree.label_set);
  std::vector<std::size_t> rows(train.row_count());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;

  detail::GrowParams params;
  params.criterion = SplitCriterion::gain_ratio;
  params.mean_gain_guard = true;
  params.min_leaf = config.min_leaf;
  params.max_depth = config.max_depth;
  tree.root = detail::grow_tree(train, rows, ids, tree.label_set.size(), params);
  if (config.prune) prune_pessimistic(*tree.root, config.confidence);
  return tree;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> rep_grow_prune_split(
    const Dataset& data, double prune_fraction, std::uint64_t seed) {
  if (data.row_count() == 0) throw Error(ErrorCode::EmptyDataset, "dataset is empty");
  if (!(prune_fraction > 0.0 && prune_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "prune_fraction must lie in (0, 1)");
  }
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < data.row_count(); ++r) groups[data.labels[r]].push_back(r);

  std::vector<std::size_t> grow, prune;
  Rng rng(seed);
  for (auto& [label, rows] : groups) {
    rng.shuffle(rows);
    const std::size_t n_prune =
        static_cast<std::size_t>(std::floor(static_cast<double>(rows.size()) * prune_fraction));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      (i < n_prune ? prune : grow).push_back(rows[i]);
    }
  }
  if (prune.empty()) {
    // every class is too small to give the prune partition a row
    const auto smallest = std::min_element(
        groups.begin(), groups.end(),
        [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
    const std::size_t required =
        static_cast<std::size_t>(std::ceil(1.0 / prune_fraction));
    throw ClassTooSmallError(smallest->first, smallest->second.size(), required);
  }
  std::sort(grow.begin(), grow.end());
  std::sort(prune.begin(), prune.end());
  return {std::move(grow), std::move(prune)};
}

DecisionTree grow_rep(const Dataset& train, const TreeConfig& config, RepPruneTrace* trace) {
  if (train.row_count() == 0) throw Error(ErrorCode::EmptyDataset, "training set is empty");
  validate_tree_config(config);

  auto [grow_rows, prune_rows] =
      rep_grow_prune_split(train, config.rep_prune_fraction, config.seed);

  DecisionTree tree;
  tree.feature_names = train.schema.feature_names;
  tree.schema_fingerprint = train.schema.fingerprint();
  tree.label_set = distinct_labels(train);
  const std::vector<int> ids = detail::label_ids(train, tree.label_set);

  detail::GrowParams params;
  params.criterion = SplitCriterion::gain;
  params.mean_gain_guard = false;
  params.min_leaf = config.min_leaf;
  params.max_depth = config.max_depth;
  tree.root = detail::grow_tree(train, grow_rows, ids, tree.label_set.size(), params);

  if (trace) {
    trace->steps.clear();
    trace->nodes_before = tree.node_count();
    trace->prune_errors_before = subtree_errors_on(*tree.root, train, ids, prune_rows);
  }
  const std::size_t errors_after = rep_prune(*tree.root, train, ids, prune_rows, trace);
  if (trace) {
    trace->nodes_after = tree.node_count();
    trace->prune_errors_after = errors_after;
  }
  return tree;
}

Prediction predict(const DecisionTree& tree, const FeatureVector& v) {
  if (v.size() != tree.feature_names.size()) {
    throw Error(ErrorCode::SchemaMismatch,
                "vector has " + std::to_string(v.size()) + " features, model expects " +
                    std::to_string(tree.feature_names.size()));
  }
  const TreeNode* node = tree.root.get();
  while (!node->leaf) {
    node = v[node->test.feature_index] <= node->test.threshold ? node->left.get()
                                                               : node->right.get();
  }
  Prediction p;
  const double total = static_cast<double>(node->total());
  p.probabilities.resize(node->class_counts.size());
  for (std::size_t i = 0; i < node->class_counts.size(); ++i) {
    p.probabilities[i] = static_cast<double>(node->class_counts[i]) / total;
  }
  p.label = tree.label_set[node->majority()];
  return p;
}

}  // namespace miblearn
