#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdtk::cli {

inline constexpr const char* kToolVersion = "0.3.0";

// Exit codes of the pdtk tool.
enum Exit : int {
  kOk = 0,
  kUsage = 1,        // parse or validation error, wrong machine kind, cap exceeded
  kTermination = 2,  // a path ran past the step bound
  kRegression = 3,   // regression or certificate mismatch
};

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_hex(const std::string& bytes);

}  // namespace pdtk::cli
