#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "miblearn/dataset.hpp"
#include "miblearn/learner.hpp"

namespace miblearn {

struct ConfusionMatrix {
  std::vector<std::string> labels;               // sorted union of actual and predicted
  std::vector<std::vector<std::size_t>> counts;  // counts[actual][predicted]

  std::size_t total() const;
  std::size_t diagonal() const;
  std::size_t index_of(const std::string& label) const;  // UnknownLabel
};

struct ClassMetrics {
  std::string label;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double tp_rate = 0, fp_rate = 0, precision = 0, recall = 0, f_measure = 0;
};

struct WeightedMetrics {
  double tp_rate = 0, fp_rate = 0, precision = 0, recall = 0, f_measure = 0;
};

/// Tallies (actual, predicted) pairs. Errors: EmptyInput.
ConfusionMatrix confusion(const std::vector<std::pair<std::string, std::string>>& pairs);

/// One-vs-rest counts and rates for `label`. Zero denominators yield 0, not
/// NaN. Errors: UnknownLabel.
ClassMetrics class_metrics(const ConfusionMatrix& m, const std::string& label);

/// Support-weighted means of the per-class rates. Errors: MissingSupport.
WeightedMetrics weighted_metrics(const std::vector<ClassMetrics>& per_class,
                                 const std::map<std::string, std::size_t>& supports);

/// trace / total. Errors: EmptyMatrix.
double accuracy(const ConfusionMatrix& m);

struct EvalReport {
  ConfusionMatrix matrix;
  std::vector<ClassMetrics> per_class;  // matrix label order
  WeightedMetrics weighted;
  double accuracy = 0.0;
  int fold_count = 0;  // 0 = direct evaluation, no cross-validation
  std::uint64_t seed = 0;
  std::string model_description;
};

EvalReport make_report(ConfusionMatrix matrix, int fold_count, std::uint64_t seed,
                       std::string model_description);

/// Stratified k-fold cross-validation: per fold, train on the other k-1 folds
/// and predict the held-out rows; all pairs pool into one matrix. Per-fold
/// learner seeds derive from (learner seed, fold), fold assignment from
/// `seed`. Deterministic given all inputs.
EvalReport cross_validate(const LearnerSpec& learner, const Dataset& data, int k = 10,
                          std::uint64_t seed = 0, int n_threads = 1);

/// Human-readable report: accuracy, per-class and weighted rate table, and
/// the confusion matrix.
std::string render_text(const EvalReport& report);

/// Machine-readable rows: class,tp_rate,fp_rate,precision,recall,f_measure,support
/// one row per class plus a final `weighted` row.
void write_csv(const EvalReport& report, std::ostream& out);

}  // namespace miblearn
