#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fastme::cli {

// Exit codes: 0 success, 1 runtime failure, 2 bad flags or configuration.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fastme::cli
