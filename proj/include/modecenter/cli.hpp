#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace modecenter::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

/// Reads newline-delimited numbers, or the named column of a CSV file when
/// `column` is set. Blank lines and lines starting with '#' are skipped.
/// Throws DataError naming `source` and the offending line.
std::vector<double> read_values(std::istream& in, const std::optional<std::string>& column,
                                const std::string& source);

/// Entry point of the modecenter tool: subcommands estimate, variance-curve,
/// simulate and case-study. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modecenter::cli
