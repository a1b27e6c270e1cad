#include "miblearn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "miblearn/errors.hpp"
#include "miblearn/rng.hpp"

namespace miblearn {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

std::string to_lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

bool parse_cell(const std::string& cell, double& out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && !cell.empty();
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct CsvTable {
  std::vector<std::size_t> feature_cols;  // per schema feature, column index
  std::size_t label_col = 0;
  bool has_label = false;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_table(std::istream& in, const MibSchema& schema, bool need_label) {
  std::string line;
  // header
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyFile, "input has no header row");
  const std::vector<std::string> header = split_line(line);

  CsvTable table;
  table.feature_cols.resize(schema.feature_count());
  for (std::size_t f = 0; f < schema.feature_count(); ++f) {
    const std::string& name = schema.feature_names[f];
    std::size_t found = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) {
        if (found != header.size()) {
          throw Error(ErrorCode::InvalidArgument, "duplicate column '" + name + "' in header");
        }
        found = c;
      }
    }
    if (found == header.size()) {
      throw Error(ErrorCode::MissingColumn, "header lacks column '" + name + "'");
    }
    table.feature_cols[f] = found;
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == schema.label_column) {
      if (table.has_label) {
        throw Error(ErrorCode::InvalidArgument,
                    "duplicate column '" + schema.label_column + "' in header");
      }
      table.has_label = true;
      table.label_col = c;
    }
  }
  if (need_label && !table.has_label) {
    throw Error(ErrorCode::MissingColumn, "header lacks column '" + schema.label_column + "'");
  }

  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;  // tolerate blank lines / trailing newline
    table.rows.push_back(split_line(line));
  }
  return table;
}

FeatureVector parse_row(const CsvTable& table, const MibSchema& schema, std::size_t r) {
  const std::vector<std::string>& cells = table.rows[r];
  FeatureVector v(schema.feature_count());
  for (std::size_t f = 0; f < schema.feature_count(); ++f) {
    const std::size_t col = table.feature_cols[f];
    if (col >= cells.size()) {
      throw BadValueError(r + 1, schema.feature_names[f], "<missing cell>");
    }
    double x = 0.0;
    if (!parse_cell(cells[col], x) || !std::isfinite(x) || x < 0.0) {
      throw BadValueError(r + 1, schema.feature_names[f], cells[col]);
    }
    v[f] = x;
  }
  return v;
}

}  // namespace

MibSchema MibSchema::ip_group() {
  MibSchema s;
  s.feature_names = {"ipInReceives",    "ipInDelivers",  "ipOutRequests",
                     "ipOutDiscards",   "ipInDiscards",  "ipForwDatagrams",
                     "ipOutNoRoutes",   "ipInAddrErrors"};
  return s;
}

std::uint64_t MibSchema::fingerprint() const {
  // FNV-1a over the name list with a separator byte.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (const std::string& name : feature_names) {
    for (unsigned char c : name) mix(c);
    mix(0x1f);
  }
  return h;
}

std::size_t MibSchema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < feature_names.size(); ++i) {
    if (feature_names[i] == name) return i;
  }
  throw Error(ErrorCode::UnknownFeature, "unknown feature '" + name + "'");
}

std::string v_notation(const std::string& feature_name) {
  static const MibSchema canonical = MibSchema::ip_group();
  for (std::size_t i = 0; i < canonical.feature_names.size(); ++i) {
    if (canonical.feature_names[i] == feature_name) return "V" + std::to_string(i + 1);
  }
  return feature_name;
}

Dataset load_csv(std::istream& in, const MibSchema& schema) {
  const CsvTable table = read_table(in, schema, /*need_label=*/true);
  Dataset data;
  data.schema = schema;
  data.features.reserve(table.rows.size());
  data.labels.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    data.features.push_back(parse_row(table, schema, r));
    const std::vector<std::string>& cells = table.rows[r];
    if (table.label_col >= cells.size()) {
      throw BadValueError(r + 1, schema.label_column, "<missing cell>");
    }
    std::string label = to_lower(trim(cells[table.label_col]));
    if (label.empty()) {
      throw BadValueError(r + 1, schema.label_column, cells[table.label_col]);
    }
    data.labels.push_back(std::move(label));
  }
  return data;
}

std::vector<FeatureVector> load_csv_unlabeled(std::istream& in, const MibSchema& schema) {
  const CsvTable table = read_table(in, schema, /*need_label=*/false);
  std::vector<FeatureVector> rows;
  rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    rows.push_back(parse_row(table, schema, r));
  }
  return rows;
}

void save_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t f = 0; f < data.schema.feature_count(); ++f) {
    out << data.schema.feature_names[f] << ',';
  }
  out << data.schema.label_column << '\n';
  for (std::size_t r = 0; r < data.row_count(); ++r) {
    for (double v : data.features[r]) {
      out << format_double(v) << ',';
    }
    out << data.labels[r] << '\n';
  }
}

std::vector<std::size_t> FoldPlan::test_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < assignments.size(); ++r) {
    if (assignments[r] == fold) rows.push_back(r);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < assignments.size(); ++r) {
    if (assignments[r] != fold) rows.push_back(r);
  }
  return rows;
}

FoldPlan stratified_folds(const Dataset& data, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "fold count must be at least 2");
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < data.row_count(); ++r) {
    groups[data.labels[r]].push_back(r);
  }
  for (const auto& [label, rows] : groups) {
    if (rows.size() < static_cast<std::size_t>(k)) {
      throw ClassTooSmallError(label, rows.size(), static_cast<std::size_t>(k));
    }
  }
  FoldPlan plan;
  plan.k = k;
  plan.assignments.assign(data.row_count(), 0);
  Rng rng(seed);
  for (auto& [label, rows] : groups) {
    rng.shuffle(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      plan.assignments[rows[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
  }
  return plan;
}

Dataset project(const Dataset& data, const std::vector<std::string>& subset) {
  if (subset.empty()) {
    throw Error(ErrorCode::InvalidArgument, "feature subset is empty");
  }
  std::set<std::string> wanted;
  for (const std::string& name : subset) {
    data.schema.index_of(name);  // UnknownFeature if absent
    if (!wanted.insert(name).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate feature '" + name + "' in subset");
    }
  }
  // keep the schema's relative order, not the subset's
  std::vector<std::size_t> keep;
  Dataset out;
  out.schema.label_column = data.schema.label_column;
  for (std::size_t f = 0; f < data.schema.feature_count(); ++f) {
    if (wanted.count(data.schema.feature_names[f])) {
      keep.push_back(f);
      out.schema.feature_names.push_back(data.schema.feature_names[f]);
    }
  }
  out.features.reserve(data.row_count());
  for (const FeatureVector& row : data.features) {
    FeatureVector v(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) v[i] = row[keep[i]];
    out.features.push_back(std::move(v));
  }
  out.labels = data.labels;
  return out;
}

std::map<std::string, std::size_t> class_distribution(const Dataset& data) {
  std::map<std::string, std::size_t> counts;
  for (const std::string& label : data.labels) ++counts[label];
  return counts;
}

std::vector<std::string> distinct_labels(const Dataset& data) {
  std::set<std::string> s(data.labels.begin(), data.labels.end());
  return {s.begin(), s.end()};
}

}  // namespace miblearn
