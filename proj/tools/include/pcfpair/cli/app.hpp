#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pcfpair::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitNoSolution = 2,
  kExitUsage = 64,
  kExitDomain = 65,
  kExitInternal = 70,
};

/// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Path of the bundled configuration (build tree first, then install prefix).
std::string default_config_path();

}  // namespace pcfpair::cli
