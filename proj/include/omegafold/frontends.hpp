#pragma once

#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "omegafold/lasso.hpp"
#include "omegafold/syntax.hpp"

namespace omegafold {

struct BuchiAutomaton {
  std::vector<std::string> sigma;
  std::vector<std::string> states;
  std::string initial;
  std::vector<std::tuple<std::string, std::string, std::string>> transitions;  // (q, a, q')
  std::vector<std::string> finals;
};

// "states 1,2. initial 1. final 2. sigma a,b. trans 1 a 1. ..."
BuchiAutomaton parse_buchi(const std::string& text);
std::string render_buchi(const BuchiAutomaton& a);
void validate_buchi(const BuchiAutomaton& a);

struct Encoding {
  Program program;
  std::string query;
};

// Runs are infinite lists of states; query accepting_run.
Encoding encode_buchi(const BuchiAutomaton& a);

struct BuchiVerdict {
  bool empty = true;
  std::optional<LassoWord> run;    // over states
  std::optional<LassoWord> input;  // over sigma
};

// Reachable final state lying on a cycle.
BuchiVerdict buchi_empty_direct(const BuchiAutomaton& a);
// Whether some run on the lasso input visits a final state infinitely often.
bool buchi_accepts(const BuchiAutomaton& a, const LassoWord& input);
// Input letters along a state lasso, taking the first transition in order;
// nullopt when the lasso is not a run.
std::optional<LassoWord> input_for_run(const BuchiAutomaton& a, const LassoWord& run);

struct Regex;
using RegexPtr = std::shared_ptr<const Regex>;
struct Regex {
  enum class Kind { symbol, cat, alt, star, omega };
  Kind kind = Kind::symbol;
  std::string symbol;
  std::vector<RegexPtr> kids;
};

// Precedence: postfix * and ^w, then concatenation, then +. Symbols are
// single lowercase letters or digits. Only omega-regular shapes e^w,
// e1 e2^w and sums of those are accepted.
RegexPtr parse_omega_regex(const std::string& text);
std::string to_string(const RegexPtr& r);
std::vector<std::string> regex_symbols(const RegexPtr& r);
// Finite term over cat/alt/star/omega with alphabet constants as leaves.
Term reify_regex(const RegexPtr& r);
// Buchi automaton recognizing L(f), built from position automata.
BuchiAutomaton regex_automaton(const RegexPtr& f, const std::vector<std::string>& sigma);
bool regex_accepts(const RegexPtr& f, const LassoWord& w, const std::vector<std::string>& sigma);

// The membership program with expr1/expr2 and not_contained(X); the
// containment holds iff no X satisfies not_contained.
Encoding encode_containment(const RegexPtr& f1, const RegexPtr& f2,
                            const std::vector<std::string>& sigma);

}  // namespace omegafold
