#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace miblearn::cli {

/// Runs one CLI invocation (args exclude the program name). Returns the
/// process exit code; all errors are reported on `err` as a single line with
/// the stable prefix `error: <Code>: <message>`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace miblearn::cli
