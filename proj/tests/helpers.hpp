#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "miblearn/dataset.hpp"

namespace testutil {

inline miblearn::Dataset make_dataset(
    std::vector<std::string> features,
    const std::vector<std::pair<std::vector<double>, std::string>>& rows) {
  miblearn::Dataset data;
  data.schema.feature_names = std::move(features);
  for (const auto& [values, label] : rows) {
    data.features.push_back(values);
    data.labels.push_back(label);
  }
  return data;
}

/// Single numeric feature named "x".
inline miblearn::Dataset make_1d(const std::vector<double>& values,
                                 const std::vector<std::string>& labels) {
  miblearn::Dataset data;
  data.schema.feature_names = {"x"};
  for (std::size_t i = 0; i < values.size(); ++i) {
    data.features.push_back({values[i]});
    data.labels.push_back(labels[i]);
  }
  return data;
}

struct TempDir {
  std::filesystem::path path;

  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "miblearn_XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    path = ::mkdtemp(buf.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace testutil
