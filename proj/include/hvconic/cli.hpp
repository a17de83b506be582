#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hvconic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Domain errors are
/// printed to err as "ERROR <code>: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hvconic::cli
