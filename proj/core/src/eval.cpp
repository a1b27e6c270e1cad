#include "miblearn/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

#include "miblearn/errors.hpp"
#include "miblearn/rng.hpp"

namespace miblearn {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.schema = data.schema;
  out.features.reserve(rows.size());
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    out.features.push_back(data.features[r]);
    out.labels.push_back(data.labels[r]);
  }
  return out;
}

}  // namespace

const char* to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::c45: return "c45";
    case LearnerKind::rep: return "rep";
    case LearnerKind::forest: return "forest";
  }
  return "?";
}

std::optional<LearnerKind> learner_kind_from(const std::string& token) {
  if (token == "c45") return LearnerKind::c45;
  if (token == "rep") return LearnerKind::rep;
  if (token == "forest") return LearnerKind::forest;
  return std::nullopt;
}

std::string LearnerSpec::describe() const {
  std::ostringstream out;
  out << to_string(kind) << '(';
  if (kind == LearnerKind::forest) {
    out << "trees=" << forest.n_trees << ", features_per_split=";
    if (forest.features_per_split > 0) {
      out << forest.features_per_split;
    } else {
      out << "auto";
    }
    out << ", min_leaf=" << forest.base.min_leaf << ", seed=" << forest.seed;
  } else {
    out << "min_leaf=" << tree.min_leaf;
    if (kind == LearnerKind::c45) {
      if (tree.prune) {
        out << ", confidence=" << tree.confidence;
      } else {
        out << ", unpruned";
      }
    } else {
      out << ", prune_fraction=" << tree.rep_prune_fraction << ", seed=" << tree.seed;
    }
    if (tree.max_depth >= 0) out << ", max_depth=" << tree.max_depth;
  }
  out << ')';
  return out.str();
}

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts) {
    for (std::size_t c : row) t += c;
  }
  return t;
}

std::size_t ConfusionMatrix::diagonal() const {
  std::size_t t = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) t += counts[i][i];
  return t;
}

std::size_t ConfusionMatrix::index_of(const std::string& label) const {
  const auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) {
    throw Error(ErrorCode::UnknownLabel, "label '" + label + "' not in the matrix");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

ConfusionMatrix confusion(const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no (actual, predicted) pairs");
  std::set<std::string> label_set;
  for (const auto& [actual, predicted] : pairs) {
    label_set.insert(actual);
    label_set.insert(predicted);
  }
  ConfusionMatrix m;
  m.labels.assign(label_set.begin(), label_set.end());
  m.counts.assign(m.labels.size(), std::vector<std::size_t>(m.labels.size(), 0));
  for (const auto& [actual, predicted] : pairs) {
    ++m.counts[m.index_of(actual)][m.index_of(predicted)];
  }
  return m;
}

ClassMetrics class_metrics(const ConfusionMatrix& m, const std::string& label) {
  const std::size_t i = m.index_of(label);
  ClassMetrics out;
  out.label = label;
  out.tp = m.counts[i][i];
  for (std::size_t a = 0; a < m.labels.size(); ++a) {
    for (std::size_t p = 0; p < m.labels.size(); ++p) {
      if (a == i && p != i) out.fn += m.counts[a][p];
      if (a != i && p == i) out.fp += m.counts[a][p];
      if (a != i && p != i) out.tn += m.counts[a][p];
    }
  }
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  out.precision = ratio(out.tp, out.tp + out.fp);
  out.recall = ratio(out.tp, out.tp + out.fn);
  out.tp_rate = out.recall;
  out.fp_rate = ratio(out.fp, out.fp + out.tn);
  out.f_measure = (out.precision + out.recall) == 0.0
                      ? 0.0
                      : 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

WeightedMetrics weighted_metrics(const std::vector<ClassMetrics>& per_class,
                                 const std::map<std::string, std::size_t>& supports) {
  double total = 0.0;
  WeightedMetrics w;
  for (const ClassMetrics& c : per_class) {
    const auto it = supports.find(c.label);
    if (it == supports.end()) {
      throw Error(ErrorCode::MissingSupport, "no support count for label '" + c.label + "'");
    }
    const double s = static_cast<double>(it->second);
    total += s;
    w.tp_rate += s * c.tp_rate;
    w.fp_rate += s * c.fp_rate;
    w.precision += s * c.precision;
    w.recall += s * c.recall;
    w.f_measure += s * c.f_measure;
  }
  if (total == 0.0) {
    throw Error(ErrorCode::MissingSupport, "support counts sum to zero");
  }
  w.tp_rate /= total;
  w.fp_rate /= total;
  w.precision /= total;
  w.recall /= total;
  w.f_measure /= total;
  return w;
}

double accuracy(const ConfusionMatrix& m) {
  const std::size_t t = m.total();
  if (t == 0) throw Error(ErrorCode::EmptyMatrix, "matrix has no entries");
  return static_cast<double>(m.diagonal()) / static_cast<double>(t);
}

EvalReport make_report(ConfusionMatrix matrix, int fold_count, std::uint64_t seed,
                       std::string model_description) {
  EvalReport report;
  report.matrix = std::move(matrix);
  for (const std::string& label : report.matrix.labels) {
    report.per_class.push_back(class_metrics(report.matrix, label));
  }
  std::map<std::string, std::size_t> supports;
  for (std::size_t i = 0; i < report.matrix.labels.size(); ++i) {
    std::size_t row_sum = 0;
    for (std::size_t p = 0; p < report.matrix.labels.size(); ++p) {
      row_sum += report.matrix.counts[i][p];
    }
    supports[report.matrix.labels[i]] = row_sum;
  }
  report.weighted = weighted_metrics(report.per_class, supports);
  report.accuracy = accuracy(report.matrix);
  report.fold_count = fold_count;
  report.seed = seed;
  report.model_description = std::move(model_description);
  return report;
}

EvalReport cross_validate(const LearnerSpec& learner, const Dataset& data, int k,
                          std::uint64_t seed, int n_threads) {
  const FoldPlan plan = stratified_folds(data, k, seed);
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(data.row_count());
  for (int fold = 0; fold < k; ++fold) {
    const Dataset train = take_rows(data, plan.train_rows(fold));
    const std::vector<std::size_t> test = plan.test_rows(fold);
    const std::uint64_t fold_seed =
        derive_seed(learner.kind == LearnerKind::forest ? learner.forest.seed
                                                        : learner.tree.seed,
                    static_cast<std::uint64_t>(fold));
    if (learner.kind == LearnerKind::forest) {
      ForestConfig config = learner.forest;
      config.seed = fold_seed;
      const RandomForest forest = train_forest(train, config, n_threads);
      for (std::size_t r : test) {
        pairs.emplace_back(data.labels[r], predict_forest(forest, data.features[r]).label);
      }
    } else {
      TreeConfig config = learner.tree;
      config.seed = fold_seed;
      const DecisionTree tree =
          learner.kind == LearnerKind::c45 ? grow_c45(train, config) : grow_rep(train, config);
      for (std::size_t r : test) {
        pairs.emplace_back(data.labels[r], predict(tree, data.features[r]).label);
      }
    }
  }
  return make_report(confusion(pairs), k, seed, learner.describe());
}

std::string render_text(const EvalReport& report) {
  std::ostringstream out;
  out << "model: " << report.model_description << '\n';
  if (report.fold_count > 0) {
    out << "protocol: " << report.fold_count << "-fold stratified cross-validation, seed "
        << report.seed << '\n';
  } else {
    out << "protocol: direct evaluation of supplied labels\n";
  }
  const std::size_t total = report.matrix.total();
  char line[256];
  std::snprintf(line, sizeof line, "instances: %zu   accuracy: %.4f (%zu/%zu)\n\n", total,
                report.accuracy, report.matrix.diagonal(), total);
  out << line;

  std::size_t width = 12;  // "weighted avg"
  for (const std::string& label : report.matrix.labels) width = std::max(width, label.size());
  std::snprintf(line, sizeof line, "%-*s  %8s  %8s  %9s  %8s  %9s  %7s\n",
                static_cast<int>(width), "class", "TP Rate", "FP Rate", "Precision", "Recall",
                "F-Measure", "support");
  out << line;
  for (const ClassMetrics& c : report.per_class) {
    std::snprintf(line, sizeof line, "%-*s  %8.4f  %8.4f  %9.4f  %8.4f  %9.4f  %7zu\n",
                  static_cast<int>(width), c.label.c_str(), c.tp_rate, c.fp_rate, c.precision,
                  c.recall, c.f_measure, c.tp + c.fn);
    out << line;
  }
  std::snprintf(line, sizeof line, "%-*s  %8.4f  %8.4f  %9.4f  %8.4f  %9.4f  %7zu\n",
                static_cast<int>(width), "weighted avg", report.weighted.tp_rate,
                report.weighted.fp_rate, report.weighted.precision, report.weighted.recall,
                report.weighted.f_measure, total);
  out << line;

  out << "\nconfusion matrix (rows actual, columns predicted):\n";
  std::snprintf(line, sizeof line, "%-*s", static_cast<int>(width), "");
  out << line;
  for (const std::string& label : report.matrix.labels) {
    std::snprintf(line, sizeof line, "  %*s", static_cast<int>(std::max<std::size_t>(label.size(), 5)),
                  label.c_str());
    out << line;
  }
  out << '\n';
  for (std::size_t a = 0; a < report.matrix.labels.size(); ++a) {
    std::snprintf(line, sizeof line, "%-*s", static_cast<int>(width),
                  report.matrix.labels[a].c_str());
    out << line;
    for (std::size_t p = 0; p < report.matrix.labels.size(); ++p) {
      std::snprintf(line, sizeof line, "  %*zu",
                    static_cast<int>(std::max<std::size_t>(report.matrix.labels[p].size(), 5)),
                    report.matrix.counts[a][p]);
      out << line;
    }
    out << '\n';
  }
  return out.str();
}

void write_csv(const EvalReport& report, std::ostream& out) {
  out << "class,tp_rate,fp_rate,precision,recall,f_measure,support\n";
  for (const ClassMetrics& c : report.per_class) {
    out << c.label << ',' << format_double(c.tp_rate) << ',' << format_double(c.fp_rate) << ','
        << format_double(c.precision) << ',' << format_double(c.recall) << ','
        << format_double(c.f_measure) << ',' << (c.tp + c.fn) << '\n';
  }
  out << "weighted," << format_double(report.weighted.tp_rate) << ','
      << format_double(report.weighted.fp_rate) << ',' << format_double(report.weighted.precision)
      << ',' << format_double(report.weighted.recall) << ','
      << format_double(report.weighted.f_measure) << ',' << report.matrix.total() << '\n';
}

}  // namespace miblearn
