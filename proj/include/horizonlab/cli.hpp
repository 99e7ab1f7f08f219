#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace horizonlab {

/// Exit codes of the command-line interface.
enum ExitCode { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

/// Parses and runs one command line (args excludes the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace horizonlab
