#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace natred::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 2;
inline constexpr int kComputationError = 3;
inline constexpr int kVerifyFailure = 4;

/// Runs the command line (without the program name). JSON reports go to out,
/// diagnostics to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses an angle in radians; a trailing "pi" multiplies by pi ("0.5pi", "pi").
double parse_angle(const std::string& text);

/// Parses a comma separated list of numbers.
std::vector<double> parse_list(const std::string& text);

}  // namespace natred::cli
