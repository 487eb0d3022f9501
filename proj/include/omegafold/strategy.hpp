#pragma once

#include <optional>
#include <string>

#include "omegafold/monadic.hpp"
#include "omegafold/transform.hpp"

namespace omegafold {

// Clauses of the predicates reachable from `pred` through clause bodies.
Program reachable_slice(const Program& p, const std::string& pred);

struct StrategyOptions {
  std::size_t max_steps = 6000;       // rule applications per attempt
  std::size_t max_definitions = 120;  // definitions introduced per attempt
  int level_rounds = 4;               // re-runs with raised levels for tightness
};

struct StrategyResult {
  bool success = false;
  Script script;
  TransformState state;
  Program slice;  // reachable part of the final program
  std::optional<MonadicProgram> monadic;
  std::string failure;  // reason when !success
  std::size_t definitions = 0;
};

// Best-effort unfold/fold strategy that eliminates existential variables
// and consumes one list symbol per clause, stopping when the part of the
// program reachable from `query` is monadic. The emitted script replays
// the derivation through run_script.
StrategyResult auto_derive_monadic(const Program& p, const std::string& query,
                                   const StrategyOptions& opts = {});

}  // namespace omegafold
