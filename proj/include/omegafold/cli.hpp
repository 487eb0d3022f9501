#pragma once

#include <iosfwd>
#include <vector>
#include <string>

namespace omegafold {

// Exit codes of the command line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_no = 1,            // negative verdict (or parse failure for `check`)
  exit_input = 2,         // input outside the supported class
  exit_inadmissible = 3,  // transformation sequence rejected
  exit_conflict = 4,      // semantic conflict between two evaluations
  exit_strategy = 5,      // automatic derivation failed
};

// Runs one command line (args excludes the program name) and returns the
// exit code. Output is line-oriented `key: value`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace omegafold
