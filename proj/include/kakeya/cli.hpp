#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kakeya {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitViolation = 2,
    kExitNonConvergence = 3,
};

/// Runs one command. `args` excludes the program name, e.g.
/// {"eval", "--config", "c.json", "--grid", "64"}. Primary output goes to
/// --out when given, else to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kakeya
