#include "miblearn/featsel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "miblearn/errors.hpp"
#include "miblearn/rng.hpp"
#include "tree_internal.hpp"

namespace miblearn {

namespace {

using ValueLabel = std::pair<double, int>;  // (value, label id), sorted by value

double entropy_span(const std::vector<std::size_t>& counts, std::size_t total) {
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::size_t classes_present(const std::vector<std::size_t>& counts) {
  std::size_t k = 0;
  for (std::size_t c : counts) k += (c > 0);
  return k;
}

// Fayyad-Irani recursion on pts[lo, hi). Appends accepted cut values.
void mdl_recurse(const std::vector<ValueLabel>& pts, std::size_t lo, std::size_t hi,
                 std::size_t n_labels, std::vector<double>& cuts) {
  const std::size_t n = hi - lo;
  if (n < 2) return;

  std::vector<std::size_t> total(n_labels, 0);
  for (std::size_t i = lo; i < hi; ++i) ++total[static_cast<std::size_t>(pts[i].second)];
  const std::size_t k = classes_present(total);
  if (k <= 1) return;
  const double h_parent = entropy_span(total, n);

  // entropy-minimizing boundary between distinct values; ties keep the
  // smaller threshold
  std::vector<std::size_t> left(n_labels, 0);
  bool found = false;
  double best_e = 0.0;
  std::size_t best_i = 0;
  for (std::size_t i = lo; i + 1 < hi; ++i) {
    ++left[static_cast<std::size_t>(pts[i].second)];
    if (pts[i].first == pts[i + 1].first) continue;
    const std::size_t nl = i + 1 - lo;
    const std::size_t nr = hi - (i + 1);
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
    const double e = (static_cast<double>(nl) * hl + static_cast<double>(nr) * hr) /
                     static_cast<double>(n);
    if (!found || e < best_e) {
      found = true;
      best_e = e;
      best_i = i;
    }
  }
  if (!found) return;

  const double gain = h_parent - best_e;

  std::vector<std::size_t> c1(n_labels, 0), c2(n_labels, 0);
  for (std::size_t i = lo; i <= best_i; ++i) ++c1[static_cast<std::size_t>(pts[i].second)];
  for (std::size_t i = best_i + 1; i < hi; ++i) ++c2[static_cast<std::size_t>(pts[i].second)];
  const std::size_t n1 = best_i + 1 - lo;
  const std::size_t n2 = hi - (best_i + 1);
  const double h1 = entropy_span(c1, n1);
  const double h2 = entropy_span(c2, n2);
  const double k1 = static_cast<double>(classes_present(c1));
  const double k2 = static_cast<double>(classes_present(c2));
  const double kd = static_cast<double>(k);

  const double delta = std::log2(std::pow(3.0, kd) - 2.0) -
                       (kd * h_parent - k1 * h1 - k2 * h2);
  const double accept_above =
      (std::log2(static_cast<double>(n - 1)) + delta) / static_cast<double>(n);
  if (gain <= accept_above) return;

  cuts.push_back(detail::split_midpoint(pts[best_i].first, pts[best_i + 1].first));
  mdl_recurse(pts, lo, best_i + 1, n_labels, cuts);
  mdl_recurse(pts, best_i + 1, hi, n_labels, cuts);
}

std::vector<double> mdl_cuts(std::vector<ValueLabel> pts, std::size_t n_labels) {
  std::sort(pts.begin(), pts.end(),
            [](const ValueLabel& a, const ValueLabel& b) { return a.first < b.first; });
  std::vector<double> cuts;
  mdl_recurse(pts, 0, pts.size(), n_labels, cuts);
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Ranking sorted_ranking(EvaluatorKind kind, const MibSchema& schema,
                       const std::vector<double>& weights) {
  Ranking ranking;
  ranking.evaluator = kind;
  for (std::size_t f = 0; f < schema.feature_count(); ++f) {
    ranking.scores.push_back({schema.feature_names[f], weights[f]});
  }
  std::stable_sort(ranking.scores.begin(), ranking.scores.end(),
                   [](const FeatureScore& a, const FeatureScore& b) { return a.score > b.score; });
  return ranking;
}

}  // namespace

const char* to_string(EvaluatorKind kind) {
  return kind == EvaluatorKind::infogain ? "infogain" : "relieff";
}

std::vector<double> mdl_discretize(const std::vector<double>& values,
                                   const std::vector<std::string>& labels) {
  if (values.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "values (" + std::to_string(values.size()) + ") and labels (" +
                    std::to_string(labels.size()) + ") differ in length");
  }
  std::vector<std::string> label_set(labels.begin(), labels.end());
  std::sort(label_set.begin(), label_set.end());
  label_set.erase(std::unique(label_set.begin(), label_set.end()), label_set.end());

  std::vector<ValueLabel> pts;
  pts.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto it = std::lower_bound(label_set.begin(), label_set.end(), labels[i]);
    pts.emplace_back(values[i], static_cast<int>(it - label_set.begin()));
  }
  return mdl_cuts(std::move(pts), label_set.size());
}

Ranking info_gain_scores(const Dataset& data) {
  if (data.row_count() == 0) throw Error(ErrorCode::EmptyDataset, "dataset is empty");
  const std::vector<std::string> label_set = distinct_labels(data);
  const std::vector<int> ids = detail::label_ids(data, label_set);
  const std::size_t n = data.row_count();
  const std::size_t n_labels = label_set.size();

  std::vector<std::size_t> class_counts(n_labels, 0);
  for (int id : ids) ++class_counts[static_cast<std::size_t>(id)];
  const double h_class = entropy_span(class_counts, n);

  std::vector<double> weights(data.feature_count(), 0.0);
  for (std::size_t f = 0; f < data.feature_count(); ++f) {
    std::vector<ValueLabel> pts;
    pts.reserve(n);
    for (std::size_t r = 0; r < n; ++r) pts.emplace_back(data.features[r][f], ids[r]);
    const std::vector<double> cuts = mdl_cuts(std::move(pts), n_labels);
    if (cuts.empty()) {
      weights[f] = 0.0;
      continue;
    }
    const std::size_t n_bins = cuts.size() + 1;
    std::vector<std::vector<std::size_t>> bin_counts(n_bins,
                                                     std::vector<std::size_t>(n_labels, 0));
    std::vector<std::size_t> bin_totals(n_bins, 0);
    for (std::size_t r = 0; r < n; ++r) {
      const double v = data.features[r][f];
      const std::size_t b = static_cast<std::size_t>(
          std::lower_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
      ++bin_counts[b][static_cast<std::size_t>(ids[r])];
      ++bin_totals[b];
    }
    double h_cond = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
      if (bin_totals[b] == 0) continue;
      h_cond += (static_cast<double>(bin_totals[b]) / static_cast<double>(n)) *
                entropy_span(bin_counts[b], bin_totals[b]);
    }
    // the subtraction can round a hair below zero; the score never is
    weights[f] = std::max(0.0, h_class - h_cond);
  }
  return sorted_ranking(EvaluatorKind::infogain, data.schema, weights);
}

Ranking relieff_scores(const Dataset& data, int k_neighbors, std::size_t sample_size,
                       std::uint64_t seed) {
  if (data.row_count() == 0) throw Error(ErrorCode::EmptyDataset, "dataset is empty");
  if (k_neighbors < 1) {
    throw Error(ErrorCode::InvalidArgument, "k_neighbors must be at least 1");
  }
  const std::size_t n = data.row_count();
  const std::size_t n_features = data.feature_count();
  const std::vector<std::string> label_set = distinct_labels(data);
  const std::size_t n_labels = label_set.size();
  const std::vector<int> raw_ids = detail::label_ids(data, label_set);

  // Canonical row order: sort by content so neighbor tie-breaks (and thus the
  // scores) do not depend on the row order of the input.
  std::vector<std::size_t> canon(n);
  for (std::size_t i = 0; i < n; ++i) canon[i] = i;
  std::sort(canon.begin(), canon.end(), [&](std::size_t a, std::size_t b) {
    if (data.features[a] != data.features[b]) return data.features[a] < data.features[b];
    if (raw_ids[a] != raw_ids[b]) return raw_ids[a] < raw_ids[b];
    return a < b;
  });
  std::vector<const FeatureVector*> x(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = &data.features[canon[i]];
    y[i] = raw_ids[canon[i]];
  }

  std::vector<double> range(n_features, 0.0);
  for (std::size_t f = 0; f < n_features; ++f) {
    double lo = (*x[0])[f], hi = (*x[0])[f];
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, (*x[i])[f]);
      hi = std::max(hi, (*x[i])[f]);
    }
    range[f] = hi - lo;
  }
  const auto diff = [&](std::size_t f, std::size_t a, std::size_t b) {
    return range[f] > 0.0 ? std::abs((*x[a])[f] - (*x[b])[f]) / range[f] : 0.0;
  };

  std::vector<std::vector<std::size_t>> members(n_labels);
  std::vector<double> prior(n_labels, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    members[static_cast<std::size_t>(y[i])].push_back(i);
  }
  for (std::size_t c = 0; c < n_labels; ++c) {
    prior[c] = static_cast<double>(members[c].size()) / static_cast<double>(n);
  }

  std::vector<std::size_t> samples;
  if (sample_size == 0 || sample_size >= n) {
    samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) samples[i] = i;
  } else {
    Rng rng(seed);
    samples = rng.sample_without_replacement(n, sample_size);
    std::sort(samples.begin(), samples.end());
  }
  const double m = static_cast<double>(samples.size());
  const std::size_t k = static_cast<std::size_t>(k_neighbors);

  std::vector<double> weights(n_features, 0.0);
  std::vector<double> dist(n, 0.0);
  std::vector<std::pair<double, std::size_t>> heap;
  for (std::size_t s : samples) {
    for (std::size_t j = 0; j < n; ++j) {
      double d = 0.0;
      for (std::size_t f = 0; f < n_features; ++f) d += diff(f, s, j);
      dist[j] = d;
    }
    const std::size_t own = static_cast<std::size_t>(y[s]);
    for (std::size_t c = 0; c < n_labels; ++c) {
      heap.clear();
      for (std::size_t j : members[c]) {
        if (j == s) continue;
        heap.emplace_back(dist[j], j);
      }
      if (heap.empty()) continue;
      const std::size_t take = std::min(k, heap.size());
      std::partial_sort(heap.begin(), heap.begin() + static_cast<std::ptrdiff_t>(take),
                        heap.end());
      if (c == own) {
        for (std::size_t f = 0; f < n_features; ++f) {
          double sum = 0.0;
          for (std::size_t t = 0; t < take; ++t) sum += diff(f, s, heap[t].second);
          weights[f] -= sum / static_cast<double>(take) / m;
        }
      } else {
        const double factor = prior[c] / (1.0 - prior[own]);
        for (std::size_t f = 0; f < n_features; ++f) {
          double sum = 0.0;
          for (std::size_t t = 0; t < take; ++t) sum += diff(f, s, heap[t].second);
          weights[f] += factor * sum / static_cast<double>(take) / m;
        }
      }
    }
  }
  return sorted_ranking(EvaluatorKind::relieff, data.schema, weights);
}

std::vector<std::string> top_n(const Ranking& ranking, std::size_t n) {
  if (n < 1 || n > ranking.scores.size()) {
    throw Error(ErrorCode::BadN, "n must lie in [1, " + std::to_string(ranking.scores.size()) +
                                     "], got " + std::to_string(n));
  }
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(ranking.scores[i].feature_name);
  return names;
}

std::string render_table(const Ranking& ranking) {
  std::ostringstream out;
  out << "evaluator: " << to_string(ranking.evaluator) << '\n';
  std::size_t width = 7;  // "feature"
  for (const FeatureScore& s : ranking.scores) width = std::max(width, s.feature_name.size());
  char line[160];
  std::snprintf(line, sizeof line, "rank  %-*s  %-4s  %s\n", static_cast<int>(width), "feature",
                "v", "score");
  out << line;
  std::size_t rank = 1;
  for (const FeatureScore& s : ranking.scores) {
    std::snprintf(line, sizeof line, "%4zu  %-*s  %-4s  %.6f\n", rank, static_cast<int>(width),
                  s.feature_name.c_str(), v_notation(s.feature_name).c_str(), s.score);
    out << line;
    ++rank;
  }
  return out.str();
}

void write_csv(const Ranking& ranking, std::ostream& out) {
  out << "feature,score\n";
  for (const FeatureScore& s : ranking.scores) {
    out << s.feature_name << ',' << format_double(s.score) << '\n';
  }
}

}  // namespace miblearn
