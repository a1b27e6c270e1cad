#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "miblearn/dataset.hpp"

namespace miblearn {

/// Per-class traffic signature: a multiplicative mean shift and a relative
/// noise level per feature.
struct AttackProfile {
  std::string label;
  std::vector<double> mean_shift;   // one multiplier per schema feature, >= 0
  std::vector<double> noise_scale;  // relative stddev per feature, >= 0
};

struct ScenarioConfig {
  MibSchema schema = MibSchema::ip_group();
  std::vector<double> baseline;  // per-feature mean counter delta, > 0
  std::vector<AttackProfile> profiles;
  std::size_t rows_per_class = 200;
  std::uint64_t seed = 42;
};

/// InvalidConfig unless: arities match the schema, baselines are positive,
/// shifts and noise are finite and non-negative, rows_per_class >= 1,
/// normalized labels are unique, and a "normal" profile with all-ones
/// mean_shift is present.
void validate(const ScenarioConfig& config);

/// rows_per_class rows per profile, in profile order. cell(i) is drawn as
/// baseline(i) * mean_shift(i) * (1 + noise_scale(i) * g) with g standard
/// normal from one generator seeded with config.seed, clamped at zero.
/// Pure function of the config: identical config, bit-identical dataset.
Dataset generate(const ScenarioConfig& config);

/// The committed 7-class scenario (normal plus six DoS signatures),
/// 200 rows per class, 5% relative noise, seed 42. The constants live in
/// synth.cpp as a documented table.
ScenarioConfig default_scenario();

/// JSON scenario file (same format family as model files).
ScenarioConfig load_scenario(std::istream& in);
void save_scenario(const ScenarioConfig& config, std::ostream& out);

}  // namespace miblearn
