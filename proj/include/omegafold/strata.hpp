#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "omegafold/syntax.hpp"

namespace omegafold {

// Predicate -> level. A predicate may additionally carry a measured finite
// term argument; its atoms then sit at stratum omega*level + size(arg),
// which stratifies recursion such as odd(s(X)) :- not odd(X).
struct LevelMapping {
  std::map<std::string, int> level;
  std::map<std::string, std::size_t> measured;  // predicate -> argument index (0-based)

  bool has(const std::string& p) const { return level.count(p) > 0; }
  int of(const std::string& p) const;
  // "level p = 1" lines, one per predicate, in name order.
  std::string to_string() const;
};

// Symbolic stratum of a literal: omega*rank + constant + sum coeff[X]*|X|.
struct Stratum {
  int rank = 0;
  long constant = 0;
  std::map<std::string, long> coeff;
};

Stratum stratum_of(const Literal& l, const LevelMapping& lm);
Stratum stratum_of(const Atom& a, const LevelMapping& lm);
// True when a is at least b under every ground valuation (sufficient test).
bool dominates(const Stratum& a, const Stratum& b);
bool same_stratum(const Stratum& a, const Stratum& b);

struct Unstratifiable {
  std::vector<std::string> cycle;  // p0 -> p1 -> ... -> p0
  std::string message;
};

// Minimal levels per dependency SCC. `fixed` pins levels (and optionally
// measured arguments) for some predicates; it is an error when a pinned
// level is below what the program requires.
std::variant<LevelMapping, Unstratifiable> infer_level_mapping(const Program& p,
                                                               const LevelMapping& fixed = {});

struct StratViolation {
  std::string clause;
  std::size_t position;  // 1-based
  std::string message;
};

std::vector<StratViolation> check_stratified(const Program& p, const LevelMapping& lm);
std::vector<StratViolation> check_stratified(const Clause& c, const LevelMapping& lm);

// 1-based positions of positive body atoms dominating every body literal.
std::set<std::size_t> sigma_maximal_atoms(const Clause& c, const LevelMapping& lm);
bool is_sigma_tight(const Clause& c, const LevelMapping& lm);

// Least level for a fresh unmeasured predicate defined by `clauses`.
int minimal_head_level(const std::vector<Clause>& clauses, const LevelMapping& lm);

// Parses "level p = 1" or "level p = 1 measure 2" (measure is 1-based).
void parse_level_line(const std::string& line, LevelMapping& lm);

}  // namespace omegafold
