#pragma once

#include <stdexcept>
#include <string>

namespace omegafold {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  ParseError(const std::string& msg, int line, int col)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

struct TypeError : Error {
  using Error::Error;
};

// A rule application whose side condition fails. `condition` names the
// violated condition, e.g. "R1(iii)" or "R6(i)".
struct RuleError : Error {
  RuleError(std::string cond, const std::string& msg)
      : Error(cond + ": " + msg), condition(std::move(cond)) {}
  std::string condition;
};

}  // namespace omegafold
