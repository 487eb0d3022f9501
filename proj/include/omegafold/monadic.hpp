#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "omegafold/lasso.hpp"
#include "omegafold/strata.hpp"
#include "omegafold/syntax.hpp"

namespace omegafold {

// q(X) or not q(X) over the single implicit ilist variable.
struct MLiteral {
  bool positive = true;
  std::string pred;
  MLiteral complement() const { return {!positive, pred}; }
  std::string to_string() const;
  friend auto operator<=>(const MLiteral&, const MLiteral&) = default;
};

using LiteralSet = std::set<MLiteral>;

// A clause in monadic shape, split by literal kind. Positions are 1-based.
struct MonadicClause {
  std::string id;
  std::string head;
  std::string symbol;  // empty for a propositional head or a symbol-free head q(X)
  bool epsilon = false;  // head q(X): body literals read the same position
  std::vector<std::pair<std::size_t, MLiteral>> on_head_var;
  std::vector<std::pair<std::size_t, MLiteral>> propositional;  // pred is arity 0
  // Literals sharing one existential variable: the group holds iff
  // some word satisfies all of them.
  std::vector<std::pair<std::vector<std::size_t>, LiteralSet>> fresh_groups;
};

struct MonadicProgram {
  Program program;
  LevelMapping levels;
  std::set<std::string> propositional;
  std::set<std::string> unary;
  std::vector<MonadicClause> clauses;
  // pred -> symbol -> clause indices, in program order
  std::map<std::string, std::map<std::string, std::vector<std::size_t>>> by_symbol;
  std::map<std::string, std::vector<std::size_t>> prop_clauses;
  std::map<std::string, std::vector<std::size_t>> epsilon_clauses;
  // Word-independent facts, fixed level by level at classification time.
  std::set<std::string> true_props;
  std::map<LiteralSet, bool> fresh_value;

  const std::vector<std::string>& alphabet() const { return program.sig.alphabet; }
  bool holds_propositional(const MLiteral& l) const;
  bool holds_group(const LiteralSet& g) const;
};

struct MonadicRejection {
  std::string clause;  // empty for a level-mapping failure
  std::string reason;
};

// With allow_epsilon, clauses q(X) :- ... over the head variable are also
// accepted; such programs can be evaluated on lassos but not decided.
std::variant<MonadicProgram, MonadicRejection> classify_monadic(const Program& p,
                                                                bool allow_epsilon = false);

// Goal node with the pending positive literals of the breakpoint
// construction: a loop is accepting when it passes a node with nothing
// pending, so each positive literal is discharged after finitely many steps.
struct GoalNode {
  LiteralSet literals;
  LiteralSet pending;
  std::string to_string() const;
  friend auto operator<=>(const GoalNode&, const GoalNode&) = default;
};

// How one literal of a node was expanded: a positive literal names the
// clause used; a negative literal names, for every clause with a matching
// head, the refuted body position.
struct Choice {
  MLiteral literal;
  std::vector<std::pair<std::string, std::size_t>> picks;
};

struct TableauStep {
  GoalNode node;
  std::string symbol;
  std::vector<Choice> choices;
};

// A tableau path n0 -s0-> n1 ... nk -sk-> leaf. The leaf is either the
// empty node or equal to path[loop_target].node.
struct Tableau {
  LiteralSet root;
  std::vector<TableauStep> path;
  bool loop = false;
  std::size_t loop_target = 0;
  GoalNode leaf;
  std::string filler;  // continuation symbol after a true leaf
};

struct Decision {
  bool exists = false;
  std::optional<LassoWord> witness;
  std::optional<Tableau> tableau;
  std::size_t explored = 0;
};

// Decides whether some infinite word satisfies pred(X).
Decision decide_exists(const MonadicProgram& t, const std::string& pred);
// Same for a conjunction of literals over one variable.
Decision decide_exists(const MonadicProgram& t, const LiteralSet& root);

bool verify_tableau(const MonadicProgram& t, const Tableau& tb, const LiteralSet& root,
                    std::string* why = nullptr);
bool verify_tableau(const MonadicProgram& t, const Tableau& tb, const std::string& pred,
                    std::string* why = nullptr);
LassoWord extract_witness(const Tableau& tb);

std::string render_tableau(const Tableau& tb);
std::string tableau_dot(const Tableau& tb);

}  // namespace omegafold
