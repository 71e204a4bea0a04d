#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace circfilt {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitNumeric = 4,
  kExitIo = 5,
};

/// Parses arguments (argv[0] included) and runs the chosen subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace circfilt
