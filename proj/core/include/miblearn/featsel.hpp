#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "miblearn/dataset.hpp"

namespace miblearn {

enum class EvaluatorKind { infogain, relieff };

const char* to_string(EvaluatorKind kind);

struct FeatureScore {
  std::string feature_name;
  double score = 0.0;
};

/// Scores for every schema feature, sorted descending; ties keep the schema's
/// feature order.
struct Ranking {
  EvaluatorKind evaluator = EvaluatorKind::infogain;
  std::vector<FeatureScore> scores;
};

/// Recursive entropy-minimizing binary discretization with the MDL stopping
/// rule: a cut is accepted only when its gain exceeds
/// (log2(N-1) + delta) / N on the segment it splits. Returns sorted cut
/// points strictly inside the value range (possibly none).
/// Errors: LengthMismatch.
std::vector<double> mdl_discretize(const std::vector<double>& values,
                                   const std::vector<std::string>& labels);

/// Per feature: H(class) - H(class | feature binned by its MDL cuts).
/// Features with no cuts score 0. Errors: EmptyDataset.
Ranking info_gain_scores(const Dataset& data);

/// Multiclass ReliefF with Manhattan distance on range-normalized features.
/// For every sampled instance, the k nearest same-class hits subtract their
/// mean feature difference and the k nearest misses of each other class add
/// theirs, weighted by P(class)/(1 - P(own class)). Neighbor ties are broken
/// by canonical row order (rows sorted by content), which makes the scores
/// independent of row order. sample_size 0 means all rows; the seed only
/// matters when sampling. Errors: EmptyDataset.
Ranking relieff_scores(const Dataset& data, int k_neighbors = 10,
                       std::size_t sample_size = 0, std::uint64_t seed = 0);

/// First n names of the ranking. Errors: BadN unless 1 <= n <= #features.
std::vector<std::string> top_n(const Ranking& ranking, std::size_t n);

/// Two-column text table (feature, score), descending.
std::string render_table(const Ranking& ranking);

/// CSV export: header `feature,score`, one row per feature, descending.
void write_csv(const Ranking& ranking, std::ostream& out);

}  // namespace miblearn
