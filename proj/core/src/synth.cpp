#include "miblearn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "miblearn/errors.hpp"
#include "miblearn/rng.hpp"

namespace miblearn {

namespace {

std::string normalize_label(const std::string& raw) {
  std::size_t b = 0, e = raw.size();
  while (b < e && (raw[b] == ' ' || raw[b] == '\t')) ++b;
  while (e > b && (raw[e - 1] == ' ' || raw[e - 1] == '\t')) --e;
  std::string s = raw.substr(b, e - b);
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

// Default scenario constants. Baselines are per-interval counter deltas for a
// modest edge router; each attack profile inflates the counters its traffic
// pattern touches. These values are committed reference data: experiments and
// tests cite them via default_scenario().
//
//                              inRecv inDelv outReq outDis inDis  forw  noRte adrEr
constexpr double kBaseline[] = {5200,  4600,  4100,  16,    12,    350,  6,    4};

struct ProfileSpec {
  const char* label;
  double shift[8];
};

constexpr ProfileSpec kProfiles[] = {
    {"normal",     {1.0,  1.0, 1.0,  1.0, 1.0, 1.0, 1.0, 1.0}},
    {"http-flood", {2.2,  6.5, 5.2,  1.4, 1.2, 1.0, 1.0, 1.0}},
    {"udp-flood",  {9.5,  8.0, 1.1,  2.6, 3.2, 1.9, 1.0, 1.3}},
    {"icmp-echo",  {6.8,  5.5, 4.6,  1.2, 1.0, 1.6, 1.0, 2.4}},
    {"tcp-syn",    {4.8,  1.6, 1.2,  1.0, 6.5, 1.0, 3.0, 1.0}},
    {"slowpost",   {1.35, 2.6, 1.25, 1.0, 1.0, 1.0, 1.0, 1.0}},
    {"slowloris",  {1.2,  3.9, 1.12, 1.0, 1.0, 1.0, 1.0, 1.0}},
};

constexpr double kDefaultNoise = 0.05;

}  // namespace

void validate(const ScenarioConfig& config) {
  const std::size_t f = config.schema.feature_count();
  if (f == 0) throw Error(ErrorCode::InvalidConfig, "scenario schema has no features");
  if (config.baseline.size() != f) {
    throw Error(ErrorCode::InvalidConfig, "baseline arity does not match the schema");
  }
  for (double b : config.baseline) {
    if (!std::isfinite(b) || b <= 0.0) {
      throw Error(ErrorCode::InvalidConfig, "baseline entries must be finite and positive");
    }
  }
  if (config.rows_per_class < 1) {
    throw Error(ErrorCode::InvalidConfig, "rows_per_class must be at least 1");
  }
  if (config.profiles.empty()) {
    throw Error(ErrorCode::InvalidConfig, "scenario has no profiles");
  }
  std::vector<std::string> seen;
  bool has_normal = false;
  for (const AttackProfile& p : config.profiles) {
    const std::string label = normalize_label(p.label);
    if (label.empty()) throw Error(ErrorCode::InvalidConfig, "profile with empty label");
    if (std::find(seen.begin(), seen.end(), label) != seen.end()) {
      throw Error(ErrorCode::InvalidConfig, "duplicate profile label '" + label + "'");
    }
    seen.push_back(label);
    if (p.mean_shift.size() != f || p.noise_scale.size() != f) {
      throw Error(ErrorCode::InvalidConfig,
                  "profile '" + label + "' arity does not match the schema");
    }
    for (double m : p.mean_shift) {
      if (!std::isfinite(m) || m < 0.0) {
        throw Error(ErrorCode::InvalidConfig,
                    "profile '" + label + "' has a negative or non-finite mean_shift");
      }
    }
    for (double n : p.noise_scale) {
      if (!std::isfinite(n) || n < 0.0) {
        throw Error(ErrorCode::InvalidConfig,
                    "profile '" + label + "' has a negative or non-finite noise_scale");
      }
    }
    if (label == "normal") {
      has_normal = true;
      for (double m : p.mean_shift) {
        if (m != 1.0) {
          throw Error(ErrorCode::InvalidConfig, "'normal' profile must have all-ones mean_shift");
        }
      }
    }
  }
  if (!has_normal) {
    throw Error(ErrorCode::InvalidConfig, "scenario must contain a 'normal' profile");
  }
}

Dataset generate(const ScenarioConfig& config) {
  validate(config);
  const std::size_t f = config.schema.feature_count();
  Dataset data;
  data.schema = config.schema;
  data.features.reserve(config.profiles.size() * config.rows_per_class);
  data.labels.reserve(config.profiles.size() * config.rows_per_class);
  Rng rng(config.seed);
  for (const AttackProfile& p : config.profiles) {
    const std::string label = normalize_label(p.label);
    for (std::size_t r = 0; r < config.rows_per_class; ++r) {
      FeatureVector row(f);
      for (std::size_t i = 0; i < f; ++i) {
        const double mean = config.baseline[i] * p.mean_shift[i];
        const double cell = mean * (1.0 + p.noise_scale[i] * rng.normal());
        row[i] = std::max(0.0, cell);
      }
      data.features.push_back(std::move(row));
      data.labels.push_back(label);
    }
  }
  return data;
}

ScenarioConfig default_scenario() {
  ScenarioConfig config;
  config.baseline.assign(std::begin(kBaseline), std::end(kBaseline));
  for (const ProfileSpec& spec : kProfiles) {
    AttackProfile p;
    p.label = spec.label;
    p.mean_shift.assign(std::begin(spec.shift), std::end(spec.shift));
    p.noise_scale.assign(config.schema.feature_count(), kDefaultNoise);
    config.profiles.push_back(std::move(p));
  }
  config.rows_per_class = 200;
  config.seed = 42;
  return config;
}

ScenarioConfig load_scenario(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("scenario file: ") + e.what());
  }
  try {
    ScenarioConfig config;
    if (j.contains("features")) {
      config.schema.feature_names = j.at("features").get<std::vector<std::string>>();
    }
    if (j.contains("label_column")) {
      config.schema.label_column = j.at("label_column").get<std::string>();
    }
    config.baseline = j.at("baseline").get<std::vector<double>>();
    config.rows_per_class = j.at("rows_per_class").get<std::size_t>();
    config.seed = j.at("seed").get<std::uint64_t>();
    for (const nlohmann::json& jp : j.at("profiles")) {
      AttackProfile p;
      p.label = jp.at("label").get<std::string>();
      p.mean_shift = jp.at("mean_shift").get<std::vector<double>>();
      p.noise_scale = jp.at("noise_scale").get<std::vector<double>>();
      config.profiles.push_back(std::move(p));
    }
    validate(config);
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("scenario file: ") + e.what());
  }
}

void save_scenario(const ScenarioConfig& config, std::ostream& out) {
  nlohmann::json j;
  j["features"] = config.schema.feature_names;
  j["label_column"] = config.schema.label_column;
  j["baseline"] = config.baseline;
  j["rows_per_class"] = config.rows_per_class;
  j["seed"] = config.seed;
  nlohmann::json profiles = nlohmann::json::array();
  for (const AttackProfile& p : config.profiles) {
    nlohmann::json jp;
    jp["label"] = p.label;
    jp["mean_shift"] = p.mean_shift;
    jp["noise_scale"] = p.noise_scale;
    profiles.push_back(std::move(jp));
  }
  j["profiles"] = std::move(profiles);
  out << j.dump(2) << '\n';
}

}  // namespace miblearn
