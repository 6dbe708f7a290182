#pragma once

#include <string>
#include <vector>

namespace basel {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 1 I/O or internal error, 2 divergence or global
// instability, 3 calibration or bracket failure, 4 config error.
int run_command(const std::vector<std::string>& args);

}  // namespace basel
