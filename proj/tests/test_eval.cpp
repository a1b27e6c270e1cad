#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "miblearn/errors.hpp"
#include "miblearn/eval.hpp"
#include "miblearn/rng.hpp"
#include "miblearn/synth.hpp"

using namespace miblearn;

namespace {

using Pairs = std::vector<std::pair<std::string, std::string>>;

ConfusionMatrix random_matrix(Rng& rng) {
  const std::size_t k = 1 + rng.bounded(4);
  ConfusionMatrix m;
  for (std::size_t i = 0; i < k; ++i) m.labels.push_back("c" + std::to_string(i));
  m.counts.assign(k, std::vector<std::size_t>(k, 0));
  std::size_t total = 0;
  for (auto& row : m.counts) {
    for (auto& cell : row) {
      cell = rng.bounded(2) ? rng.bounded(100) : 0;
      total += cell;
    }
  }
  if (total == 0) m.counts[0][0] = 1;
  return m;
}

}  // namespace

TEST_CASE("confusion tallies pairs over the sorted label union") {
  const ConfusionMatrix m1 = confusion(Pairs{{"a", "a"}, {"a", "a"}, {"a", "a"}, {"a", "a"}});
  CHECK(m1.labels == std::vector<std::string>{"a"});
  CHECK(m1.counts[0][0] == 4);

  const ConfusionMatrix m2 = confusion(Pairs{{"a", "a"}, {"a", "b"}, {"b", "b"}});
  CHECK(m2.labels == std::vector<std::string>{"a", "b"});
  CHECK(m2.counts[0][0] == 1);
  CHECK(m2.counts[0][1] == 1);
  CHECK(m2.counts[1][0] == 0);
  CHECK(m2.counts[1][1] == 1);
  CHECK(m2.total() == 3);

  // predicted-only labels still enter the label set
  const ConfusionMatrix m3 = confusion(Pairs{{"a", "z"}});
  CHECK(m3.labels == std::vector<std::string>{"a", "z"});

  CHECK_THROWS_AS(confusion({}), Error);
}

TEST_CASE("class_metrics reproduces the rate definitions") {
  // tp=10, fp=0, fn=0, tn=90: the all-perfect regime
  ConfusionMatrix m;
  m.labels = {"neg", "pos"};
  m.counts = {{90, 0}, {0, 10}};
  const ClassMetrics pos = class_metrics(m, "pos");
  CHECK(pos.tp == 10);
  CHECK(pos.tn == 90);
  CHECK(pos.precision == 1.0);
  CHECK(pos.recall == 1.0);
  CHECK(pos.f_measure == 1.0);
  CHECK(pos.fp_rate == 0.0);
  CHECK(pos.tp_rate == 1.0);

  // tp=3, fp=1, fn=1
  ConfusionMatrix m2;
  m2.labels = {"a", "b"};
  m2.counts = {{3, 1}, {1, 5}};
  const ClassMetrics a = class_metrics(m2, "a");
  CHECK(a.precision == 0.75);
  CHECK(a.recall == 0.75);
  CHECK(a.f_measure == 0.75);

  CHECK_THROWS_AS(class_metrics(m2, "zzz"), Error);
}

TEST_CASE("zero denominators yield zero metrics, not errors") {
  // label "b" never actually occurs and is never predicted correctly
  ConfusionMatrix m;
  m.labels = {"a", "b"};
  m.counts = {{4, 0}, {0, 0}};
  const ClassMetrics b = class_metrics(m, "b");
  CHECK(b.tp == 0);
  CHECK(b.fp == 0);
  CHECK(b.precision == 0.0);
  CHECK(b.recall == 0.0);
  CHECK(b.f_measure == 0.0);
  CHECK(b.fp_rate == 0.0);
}

TEST_CASE("weighted_metrics averages by support") {
  ClassMetrics a, b;
  a.label = "a";
  a.tp_rate = a.precision = a.recall = a.f_measure = 1.0;
  b.label = "b";
  const WeightedMetrics w = weighted_metrics({a, b}, {{"a", 3}, {"b", 1}});
  CHECK(w.f_measure == 0.75);
  CHECK(w.recall == 0.75);

  const WeightedMetrics solo = weighted_metrics({a}, {{"a", 7}});
  CHECK(solo.f_measure == 1.0);

  CHECK_THROWS_AS(weighted_metrics({a, b}, {{"a", 3}}), Error);
  try {
    weighted_metrics({a}, {{"a", 0}});
    FAIL("expected MissingSupport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingSupport);
  }
}

TEST_CASE("accuracy is the diagonal fraction") {
  ConfusionMatrix diag;
  diag.labels = {"a", "b"};
  diag.counts = {{7, 0}, {0, 3}};
  CHECK(accuracy(diag) == 1.0);

  ConfusionMatrix half;
  half.labels = {"a", "b"};
  half.counts = {{1, 1}, {1, 1}};
  CHECK(accuracy(half) == 0.5);

  ConfusionMatrix empty;
  try {
    accuracy(empty);
    FAIL("expected EmptyMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyMatrix);
  }
}

TEST_CASE("count identities hold on random matrices") {
  Rng rng(606);
  for (int trial = 0; trial < 50; ++trial) {
    const ConfusionMatrix m = random_matrix(rng);
    const std::size_t total = m.total();
    std::size_t tp_sum = 0;
    std::vector<ClassMetrics> per_class;
    std::map<std::string, std::size_t> supports;
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      const ClassMetrics c = class_metrics(m, m.labels[i]);
      std::size_t row_sum = 0, col_sum = 0;
      for (std::size_t j = 0; j < m.labels.size(); ++j) {
        row_sum += m.counts[i][j];
        col_sum += m.counts[j][i];
      }
      CHECK(c.tp + c.fn == row_sum);
      CHECK(c.tp + c.fp == col_sum);
      CHECK(c.tp + c.fp + c.fn + c.tn == total);
      tp_sum += c.tp;
      per_class.push_back(c);
      supports[m.labels[i]] = row_sum;
    }
    CHECK(tp_sum == m.diagonal());
    // micro identity: support-weighted recall equals accuracy
    const WeightedMetrics w = weighted_metrics(per_class, supports);
    CHECK(std::abs(w.recall - accuracy(m)) <= 1e-12);
  }
}

TEST_CASE("a single-leaf majority learner scores the majority rate") {
  Dataset data;
  data.schema.feature_names = {"x"};
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    data.features.push_back({rng.uniform01()});
    data.labels.push_back(i < 90 ? "normal" : "attack");
  }
  LearnerSpec spec;
  spec.kind = LearnerKind::c45;
  spec.tree.max_depth = 0;
  const EvalReport report = cross_validate(spec, data, 2, 3);
  CHECK(report.accuracy == 0.9);
  CHECK(report.matrix.total() == 100);
}

TEST_CASE("cross_validate is deterministic and pools every row once") {
  const Dataset data = generate([] {
    ScenarioConfig c = default_scenario();
    c.rows_per_class = 30;
    return c;
  }());
  LearnerSpec spec;
  spec.kind = LearnerKind::rep;
  spec.tree.seed = 5;
  const EvalReport a = cross_validate(spec, data, 5, 11);
  const EvalReport b = cross_validate(spec, data, 5, 11);
  CHECK(a.matrix.counts == b.matrix.counts);
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.matrix.total() == data.row_count());
  CHECK(a.fold_count == 5);

  std::ostringstream csv_a, csv_b;
  write_csv(a, csv_a);
  write_csv(b, csv_b);
  CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("all three learners clear 0.99 on a small separable scenario") {
  ScenarioConfig config = default_scenario();
  config.rows_per_class = 50;
  const Dataset data = generate(config);
  for (const LearnerKind kind : {LearnerKind::c45, LearnerKind::rep, LearnerKind::forest}) {
    LearnerSpec spec;
    spec.kind = kind;
    spec.forest.n_trees = 15;
    const EvalReport report = cross_validate(spec, data, 10, 42, 2);
    CHECK(report.accuracy >= 0.99);
  }
}

TEST_CASE("report rendering carries the table and the matrix") {
  const EvalReport report = make_report(
      confusion(Pairs{{"a", "a"}, {"a", "b"}, {"b", "b"}, {"b", "b"}}), 10, 42, "c45(test)");
  const std::string text = render_text(report);
  CHECK(text.find("TP Rate") != std::string::npos);
  CHECK(text.find("F-Measure") != std::string::npos);
  CHECK(text.find("weighted avg") != std::string::npos);
  CHECK(text.find("confusion matrix") != std::string::npos);
  CHECK(text.find("c45(test)") != std::string::npos);
  CHECK(text.find("10-fold") != std::string::npos);

  std::ostringstream csv;
  write_csv(report, csv);
  const std::string s = csv.str();
  CHECK(s.rfind("class,tp_rate,fp_rate,precision,recall,f_measure,support\n", 0) == 0);
  CHECK(s.find("\nweighted,") != std::string::npos);
  // one line per class plus header and weighted row
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
}
