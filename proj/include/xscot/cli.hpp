#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace xscot {

/// Full command-line entry point, separated from main() so tests can
/// drive it in-process. Returns the process exit code: 0 success,
/// 1 internal error, 2 user or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xscot
