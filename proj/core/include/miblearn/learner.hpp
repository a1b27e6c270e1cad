#pragma once

#include <optional>
#include <string>

#include "miblearn/forest.hpp"
#include "miblearn/tree.hpp"

namespace miblearn {

enum class LearnerKind { c45, rep, forest };

const char* to_string(LearnerKind kind);
std::optional<LearnerKind> learner_kind_from(const std::string& token);

/// One of the three classifiers plus its configuration.
struct LearnerSpec {
  LearnerKind kind = LearnerKind::c45;
  TreeConfig tree;      // c45 / rep
  ForestConfig forest;  // forest

  std::string describe() const;
};

}  // namespace miblearn
