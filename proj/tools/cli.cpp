#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "miblearn/dataset.hpp"
#include "miblearn/errors.hpp"
#include "miblearn/eval.hpp"
#include "miblearn/featsel.hpp"
#include "miblearn/forest.hpp"
#include "miblearn/learner.hpp"
#include "miblearn/model_io.hpp"
#include "miblearn/synth.hpp"
#include "miblearn/tree.hpp"

namespace miblearn::cli {

namespace {

namespace fs = std::filesystem;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  return out;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in = open_input(path);
  return load_csv(in, MibSchema::ip_group());
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = s.find(',', start);
    if (pos == std::string::npos) {
      if (start < s.size()) parts.push_back(s.substr(start));
      break;
    }
    if (pos > start) parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::string subset_line(const std::vector<std::string>& names) {
  std::string vs, full;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) {
      vs += ',';
      full += ", ";
    }
    vs += v_notation(names[i]);
    full += names[i];
  }
  return vs + "  (" + full + ")";
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
  std::string config_path;
  bool use_default = false;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> rows;
  std::string save_config_path;
};

int cmd_synth(const SynthArgs& args, std::ostream& out) {
  ScenarioConfig config;
  if (args.use_default) {
    config = default_scenario();
  } else {
    std::ifstream in = open_input(args.config_path);
    config = load_scenario(in);
  }
  if (args.seed) config.seed = *args.seed;
  if (args.rows) config.rows_per_class = *args.rows;

  const Dataset data = generate(config);
  {
    std::ofstream file = open_output(args.out_path);
    save_csv(data, file);
    if (!file) throw Error(ErrorCode::Io, "write to '" + args.out_path + "' failed");
  }
  if (!args.save_config_path.empty()) {
    std::ofstream file = open_output(args.save_config_path);
    save_scenario(config, file);
  }

  const auto dist = class_distribution(data);
  out << "wrote " << data.row_count() << " rows (" << dist.size() << " classes) to "
      << args.out_path << "\n";
  out << "class distribution:";
  for (const auto& [label, count] : dist) out << ' ' << label << ':' << count;
  out << "\n";
  return 0;
}

// ----------------------------------------------------------------- rank ----

struct RankArgs {
  std::string data_path;
  std::string evaluator = "infogain";
  std::optional<std::size_t> top;
  std::string out_path;
  int neighbors = 10;
  std::size_t sample = 0;
  std::uint64_t seed = 0;
};

int cmd_rank(const RankArgs& args, std::ostream& out) {
  const Dataset data = load_dataset(args.data_path);
  const Ranking ranking = args.evaluator == "infogain"
                              ? info_gain_scores(data)
                              : relieff_scores(data, args.neighbors, args.sample, args.seed);
  out << render_table(ranking);
  if (args.top) {
    const std::vector<std::string> names = top_n(ranking, *args.top);
    out << "top-" << *args.top << ": " << subset_line(names) << "\n";
  }
  if (!args.out_path.empty()) {
    std::ofstream file = open_output(args.out_path);
    write_csv(ranking, file);
  }
  return 0;
}

// ---------------------------------------------------------------- train ----

struct TrainArgs {
  std::string data_path;
  std::string model = "c45";
  std::string out_path;
  int min_leaf = -1;  // negative = per-kind default
  double confidence = 0.25;
  double prune_fraction = 1.0 / 3.0;
  int max_depth = -1;
  bool no_prune = false;
  int trees = 100;
  int features_per_split = 0;
  std::uint64_t seed = 0;
  int threads = 1;
};

LearnerSpec learner_from_args(const TrainArgs& args) {
  LearnerSpec spec;
  spec.kind = *learner_kind_from(args.model);
  TreeConfig tree;
  tree.confidence = args.confidence;
  tree.rep_prune_fraction = args.prune_fraction;
  tree.max_depth = args.max_depth;
  tree.seed = args.seed;
  tree.prune = !args.no_prune;
  if (spec.kind == LearnerKind::forest) {
    spec.forest.n_trees = args.trees;
    spec.forest.features_per_split = args.features_per_split;
    spec.forest.seed = args.seed;
    spec.forest.base.min_leaf = args.min_leaf >= 0 ? args.min_leaf : 1;
    spec.forest.base.max_depth = args.max_depth;
  } else {
    tree.min_leaf = args.min_leaf >= 0 ? args.min_leaf : 2;
    spec.tree = tree;
  }
  return spec;
}

int cmd_train(const TrainArgs& args, std::ostream& out) {
  const Dataset data = load_dataset(args.data_path);
  const LearnerSpec spec = learner_from_args(args);
  std::ofstream file = open_output(args.out_path);
  if (spec.kind == LearnerKind::forest) {
    const RandomForest forest = train_forest(data, spec.forest, args.threads);
    save_model(file, forest, spec.forest);
    std::size_t nodes = 0;
    for (const DecisionTree& t : forest.trees) nodes += t.node_count();
    char line[160];
    std::snprintf(line, sizeof line, "forest: %zu trees, mean size %.1f nodes\n",
                  forest.trees.size(),
                  static_cast<double>(nodes) / static_cast<double>(forest.trees.size()));
    out << line;
  } else {
    const DecisionTree tree = spec.kind == LearnerKind::c45 ? grow_c45(data, spec.tree)
                                                            : grow_rep(data, spec.tree);
    save_model(file, tree, spec.kind, spec.tree);
    out << to_string(spec.kind) << " tree: " << tree.node_count() << " nodes ("
        << tree.leaf_count() << " leaves), depth " << tree.depth() << "\n";
  }
  out << "model written to " << args.out_path << "\n";
  return 0;
}

// ----------------------------------------------------------------- eval ----

const std::vector<std::string> kAllPlans = {"all", "infogain-top5", "infogain-top3",
                                            "relieff-top5", "relieff-top3"};

struct EvalArgs {
  std::string data_path;
  std::string classifiers = "c45,rep,forest";
  std::string plans;  // empty = all five
  int folds = 10;
  std::uint64_t seed = 0;
  std::string out_dir;
  int trees = 100;
  int features_per_split = 0;
  int threads = 1;
};

std::vector<std::string> plan_subset(const std::string& plan, const Dataset& data,
                                     std::optional<Ranking>& infogain,
                                     std::optional<Ranking>& relieff) {
  if (plan == "all") return data.schema.feature_names;
  if (plan == "infogain-top5" || plan == "infogain-top3") {
    if (!infogain) infogain = info_gain_scores(data);
    return top_n(*infogain, plan.ends_with("5") ? 5 : 3);
  }
  if (plan == "relieff-top5" || plan == "relieff-top3") {
    if (!relieff) relieff = relieff_scores(data);
    return top_n(*relieff, plan.ends_with("5") ? 5 : 3);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown feature plan '" + plan + "'");
}

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  const Dataset data = load_dataset(args.data_path);

  std::vector<LearnerKind> classifiers;
  for (const std::string& token : split_list(args.classifiers)) {
    const auto kind = learner_kind_from(token);
    if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown classifier '" + token + "'");
    if (std::find(classifiers.begin(), classifiers.end(), *kind) == classifiers.end()) {
      classifiers.push_back(*kind);
    }
  }
  if (classifiers.empty()) {
    throw Error(ErrorCode::InvalidArgument, "classifier list is empty");
  }

  std::vector<std::string> plans;
  if (args.plans.empty()) {
    plans = kAllPlans;
  } else {
    for (const std::string& token : split_list(args.plans)) {
      if (std::find(kAllPlans.begin(), kAllPlans.end(), token) == kAllPlans.end()) {
        throw Error(ErrorCode::InvalidArgument, "unknown feature plan '" + token + "'");
      }
      if (std::find(plans.begin(), plans.end(), token) == plans.end()) plans.push_back(token);
    }
  }
  if (plans.empty()) throw Error(ErrorCode::InvalidArgument, "plan list is empty");

  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory '" + args.out_dir + "'");

  std::optional<Ranking> infogain, relieff;
  std::map<std::string, std::map<LearnerKind, double>> summary;
  std::ostringstream summary_csv;
  summary_csv << "plan,classifier,accuracy\n";

  for (const std::string& plan : plans) {
    const std::vector<std::string> subset = plan_subset(plan, data, infogain, relieff);
    out << "plan " << plan << ": " << subset_line(subset) << "\n";
    const Dataset projected = project(data, subset);
    for (LearnerKind kind : classifiers) {
      LearnerSpec spec;
      spec.kind = kind;
      spec.tree.seed = args.seed;
      spec.forest.n_trees = args.trees;
      spec.forest.features_per_split = args.features_per_split;
      spec.forest.seed = args.seed;
      const EvalReport report =
          cross_validate(spec, projected, args.folds, args.seed, args.threads);

      const std::string stem = "report_" + plan + "_" + to_string(kind);
      {
        std::ofstream file = open_output((fs::path(args.out_dir) / (stem + ".txt")).string());
        file << "plan: " << plan << " " << subset_line(subset) << "\n" << render_text(report);
      }
      {
        std::ofstream file = open_output((fs::path(args.out_dir) / (stem + ".csv")).string());
        write_csv(report, file);
      }
      summary[plan][kind] = report.accuracy;
      char row[128];
      std::snprintf(row, sizeof row, "%s,%s,%.6f\n", plan.c_str(), to_string(kind),
                    report.accuracy);
      summary_csv << row;
    }
  }

  {
    std::ofstream file = open_output((fs::path(args.out_dir) / "summary.csv").string());
    file << summary_csv.str();
  }

  out << "\naccuracy summary (rows: feature plans, columns: classifiers)\n";
  char line[256];
  std::string header = "plan           ";
  for (LearnerKind kind : classifiers) {
    std::snprintf(line, sizeof line, "  %8s", to_string(kind));
    header += line;
  }
  out << header << "\n";
  for (const std::string& plan : plans) {
    std::snprintf(line, sizeof line, "%-15s", plan.c_str());
    out << line;
    for (LearnerKind kind : classifiers) {
      std::snprintf(line, sizeof line, "  %8.4f", summary[plan][kind]);
      out << line;
    }
    out << "\n";
  }
  out << "reports written to " << args.out_dir << "\n";
  return 0;
}

// -------------------------------------------------------------- predict ----

struct PredictArgs {
  std::string model_path;
  std::string data_path;
  std::string out_path;
};

int cmd_predict(const PredictArgs& args, std::ostream& out) {
  LoadedModel model;
  {
    std::ifstream in = open_input(args.model_path);
    model = load_model(in);
  }
  MibSchema schema;
  schema.feature_names = model.feature_names();

  // Pre-scan the header so a layout mismatch reports as such.
  std::string header_line;
  {
    std::ifstream probe = open_input(args.data_path);
    if (!std::getline(probe, header_line)) {
      throw Error(ErrorCode::EmptyFile, "'" + args.data_path + "' has no header row");
    }
  }
  std::vector<std::string> header = split_list(header_line);
  for (std::string& cell : header) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ' || cell.back() == '\t')) {
      cell.pop_back();
    }
    std::size_t b = 0;
    while (b < cell.size() && (cell[b] == ' ' || cell[b] == '\t')) ++b;
    cell.erase(0, b);
  }
  std::vector<std::string> missing;
  for (const std::string& name : schema.feature_names) {
    if (std::find(header.begin(), header.end(), name) == header.end()) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) list += (i ? ", " : "") + missing[i];
    throw Error(ErrorCode::SchemaMismatch, "data lacks model feature(s): " + list);
  }
  const bool labeled =
      std::find(header.begin(), header.end(), schema.label_column) != header.end();

  std::vector<FeatureVector> rows;
  std::vector<std::string> labels;
  {
    std::ifstream in = open_input(args.data_path);
    if (labeled) {
      Dataset data = load_csv(in, schema);
      rows = std::move(data.features);
      labels = std::move(data.labels);
    } else {
      rows = load_csv_unlabeled(in, schema);
    }
  }

  std::ostringstream csv;
  if (labeled) csv << "actual,";
  csv << "predicted";
  for (const std::string& label : model.label_set()) csv << ",p_" << label;
  csv << "\n";
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Prediction p = model.predict(rows[r]);
    if (labeled) {
      csv << labels[r] << ',';
      pairs.emplace_back(labels[r], p.label);
    }
    csv << p.label;
    char buf[32];
    for (double prob : p.probabilities) {
      std::snprintf(buf, sizeof buf, ",%.6f", prob);
      csv << buf;
    }
    csv << "\n";
  }

  if (labeled && !pairs.empty()) {
    const EvalReport report =
        make_report(confusion(pairs), 0, 0,
                    std::string(to_string(model.kind)) + " model from " + args.model_path);
    out << render_text(report);
  }
  if (args.out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream file = open_output(args.out_path);
    file << csv.str();
    out << "predictions written to " << args.out_path << "\n";
  }
  return 0;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SNMP-MIB IP-group DoS anomaly detection: tree classifiers, "
               "feature ranking, cross-validated experiments"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Generate a labeled synthetic MIB counter dataset");
  auto* synth_config = synth_cmd->add_option("--config", synth_args.config_path,
                                             "Scenario config file (JSON)");
  synth_cmd->add_flag("--default", synth_args.use_default, "Use the built-in 7-class scenario")
      ->excludes(synth_config);
  synth_cmd->add_option("--out", synth_args.out_path, "Output CSV path")->required();
  synth_cmd->add_option("--seed", synth_args.seed, "Override the scenario seed");
  synth_cmd->add_option("--rows", synth_args.rows, "Override rows per class");
  synth_cmd->add_option("--save-config", synth_args.save_config_path,
                        "Also write the effective scenario config");

  RankArgs rank_args;
  CLI::App* rank_cmd = app.add_subcommand("rank", "Score features with an attribute evaluator");
  rank_cmd->add_option("--data", rank_args.data_path, "Dataset CSV")->required();
  rank_cmd->add_option("--evaluator", rank_args.evaluator, "infogain or relieff")
      ->check(CLI::IsMember({"infogain", "relieff"}));
  rank_cmd->add_option("--top", rank_args.top, "Also print the top-N subset line")
      ->check(CLI::Range(1, 1 << 20));
  rank_cmd->add_option("--out", rank_args.out_path, "Export the ranking as CSV");
  rank_cmd->add_option("--neighbors", rank_args.neighbors, "ReliefF neighbors per class")
      ->check(CLI::Range(1, 1 << 20));
  rank_cmd->add_option("--sample", rank_args.sample, "ReliefF sample size (0 = all rows)");
  rank_cmd->add_option("--seed", rank_args.seed, "ReliefF sampling seed");

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a classifier and save the model");
  train_cmd->add_option("--data", train_args.data_path, "Training dataset CSV")->required();
  train_cmd->add_option("--model", train_args.model, "c45, rep, or forest")
      ->check(CLI::IsMember({"c45", "rep", "forest"}));
  train_cmd->add_option("--out", train_args.out_path, "Model file path")->required();
  train_cmd->add_option("--min-leaf", train_args.min_leaf, "Minimum rows per split side");
  train_cmd->add_option("--confidence", train_args.confidence,
                        "Pessimistic pruning confidence (c45)");
  train_cmd->add_option("--prune-fraction", train_args.prune_fraction,
                        "Held-out fraction for reduced-error pruning (rep)");
  train_cmd->add_option("--max-depth", train_args.max_depth, "Depth limit (negative = none)");
  train_cmd->add_flag("--no-prune", train_args.no_prune, "Skip pruning (c45)");
  train_cmd->add_option("--trees", train_args.trees, "Forest size");
  train_cmd->add_option("--features-per-split", train_args.features_per_split,
                        "Features searched per node (0 = log2(k)+1)");
  train_cmd->add_option("--seed", train_args.seed, "Training seed");
  train_cmd->add_option("--threads", train_args.threads, "Forest training threads");

  EvalArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Cross-validate classifiers over feature-selection plans");
  eval_cmd->add_option("--data", eval_args.data_path, "Dataset CSV")->required();
  eval_cmd->add_option("--classifiers", eval_args.classifiers,
                       "Comma list from {c45,rep,forest}");
  eval_cmd->add_option("--plans", eval_args.plans,
                       "Comma list from {all,infogain-top5,infogain-top3,relieff-top5,"
                       "relieff-top3}; default all five");
  eval_cmd->add_option("--folds", eval_args.folds, "Cross-validation folds")
      ->check(CLI::Range(2, 1 << 20));
  eval_cmd->add_option("--seed", eval_args.seed, "Experiment seed");
  eval_cmd->add_option("--out-dir", eval_args.out_dir, "Report directory")->required();
  eval_cmd->add_option("--trees", eval_args.trees, "Forest size");
  eval_cmd->add_option("--features-per-split", eval_args.features_per_split,
                       "Forest features per node (0 = log2(k)+1)");
  eval_cmd->add_option("--threads", eval_args.threads, "Forest training threads");

  PredictArgs predict_args;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "Predict labels for a CSV with a saved model");
  predict_cmd->add_option("--model", predict_args.model_path, "Model file")->required();
  predict_cmd->add_option("--data", predict_args.data_path, "Input CSV (label column optional)")
      ->required();
  predict_cmd->add_option("--out", predict_args.out_path, "Predictions CSV path");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (synth_cmd->parsed()) {
      if (!synth_args.use_default && synth_args.config_path.empty()) {
        throw Error(ErrorCode::InvalidArgument, "pass --config <file> or --default");
      }
      return cmd_synth(synth_args, out);
    }
    if (rank_cmd->parsed()) return cmd_rank(rank_args, out);
    if (train_cmd->parsed()) return cmd_train(train_args, out);
    if (eval_cmd->parsed()) return cmd_eval(eval_args, out);
    if (predict_cmd->parsed()) return cmd_predict(predict_args, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace miblearn::cli
