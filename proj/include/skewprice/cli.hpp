#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "skewprice/analysis.hpp"

namespace skewprice::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kToleranceFailure = 1,
    kUsage = 2,
    kNumerical = 3,
};

/// Environment variable that overrides the default output format.
inline constexpr const char* kFormatEnv = "SKEWPRICE_FORMAT";

/// Runs the tool on `args` (args[0] is the program name) and returns the
/// exit code. All output goes to `out` / `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The `table1` subcommand with a replaceable pricer (empty = closed form),
/// so a deliberately broken pricer can be shown to fail the comparison.
int run_table1(const std::string& format, std::ostream& out, const CallPricer& pricer);

}  // namespace skewprice::cli
