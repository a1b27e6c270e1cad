#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace miblearn {

using FeatureVector = std::vector<double>;

/// Column layout of a labeled MIB counter table: ordered feature names plus
/// the label column.
struct MibSchema {
  std::vector<std::string> feature_names;
  std::string label_column = "class";

  /// The eight IP-group counters in canonical (V1..V8) order.
  static MibSchema ip_group();

  std::size_t feature_count() const { return feature_names.size(); }

  /// Stable 64-bit hash of the feature-name list (FNV-1a). Models carry this
  /// so predictions can be refused for data with a different layout.
  std::uint64_t fingerprint() const;

  /// Index of `name`, or UnknownFeature.
  std::size_t index_of(const std::string& name) const;
};

/// "V1".."V8" shorthand for a canonical IP-group feature; other names are
/// returned unchanged.
std::string v_notation(const std::string& feature_name);

/// Immutable after construction; rows are parallel (features[i], labels[i]).
struct Dataset {
  MibSchema schema;
  std::vector<FeatureVector> features;  // row-major, each row schema-sized
  std::vector<std::string> labels;      // lower-case tokens

  std::size_t row_count() const { return features.size(); }
  std::size_t feature_count() const { return schema.feature_count(); }
};

/// Parses a labeled CSV with a header row. Columns are mapped by name (any
/// order, extra columns ignored); all schema features and the label column
/// must be present. Feature cells must parse as finite non-negative numbers.
/// Labels are trimmed and lower-cased. Errors: MissingColumn, BadValue
/// (with 1-based data row and column name), EmptyFile.
Dataset load_csv(std::istream& in, const MibSchema& schema);

/// Feature-only ingestion for prediction inputs that have no label column.
std::vector<FeatureVector> load_csv_unlabeled(std::istream& in, const MibSchema& schema);

/// Writes the dataset in the same CSV dialect load_csv reads. Numbers are
/// printed shortest-round-trip, so load(save(d)) reproduces every cell
/// bit-exactly.
void save_csv(const Dataset& data, std::ostream& out);

struct FoldPlan {
  int k = 0;
  std::vector<int> assignments;  // per-row fold index in [0, k)

  std::vector<std::size_t> test_rows(int fold) const;
  std::vector<std::size_t> train_rows(int fold) const;
};

/// Stratified assignment: rows are grouped by class, each group shuffled with
/// `seed`, then dealt round-robin, so per-class fold counts differ by at most
/// one. Deterministic given (data, k, seed). Errors: ClassTooSmall.
FoldPlan stratified_folds(const Dataset& data, int k, std::uint64_t seed);

/// New dataset restricted to `subset`, keeping the schema's relative feature
/// order; labels unchanged. Errors: UnknownFeature.
Dataset project(const Dataset& data, const std::vector<std::string>& subset);

std::map<std::string, std::size_t> class_distribution(const Dataset& data);

/// Sorted distinct labels; the canonical label order used by all learners.
std::vector<std::string> distinct_labels(const Dataset& data);

}  // namespace miblearn
