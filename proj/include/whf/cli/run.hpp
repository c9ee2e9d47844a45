#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace whf::cli {

// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "WHFACT_OUT_DIR";

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kParseError = 2, kNumericalError = 3 };

// Entry point of the whfact tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace whf::cli
