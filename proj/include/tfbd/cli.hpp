#pragma once

// `tfbd` command-line front end.
//
// Exit codes: 0 success, 1 validation/parameter error, 2 accuracy-loss refusal,
// 3 verification failure, 4 I/O error.

#include <iosfwd>
#include <string>
#include <vector>

namespace tfbd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitAccuracy = 2;
inline constexpr int kExitVerifyFailed = 3;
inline constexpr int kExitIo = 4;

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs the tool on argv-style arguments (without the program name). Tables go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "0.1,0.5,1" or "start:stop:step" (inclusive of stop up to rounding).
std::vector<double> parse_time_grid(const std::string& spec);

}  // namespace tfbd::cli
