#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dyncon::harness {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitInputError = 2 };

// Entry point of the dyncon command; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dyncon::harness
