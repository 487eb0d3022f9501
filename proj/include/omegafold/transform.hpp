#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "omegafold/strata.hpp"
#include "omegafold/syntax.hpp"

namespace omegafold {

enum class Rule { initial, define, instantiate, unfold_pos, unfold_neg, subsume, fold_pos, fold_neg };
std::string to_string(Rule r);

// How a clause came to exist. Derived clauses have exactly one parent.
struct ClauseRecord {
  Rule rule = Rule::initial;
  std::string parent;
  std::vector<std::string> used;       // unfolding clause or folding definitions
  std::vector<std::size_t> positions;  // 1-based body positions of the parent
  std::string substitution;
  // Positive unfolding w.r.t. a sigma-maximal atom whose predicate occurs in P0.
  bool certified_unfold = false;
  int step = 0;
};

struct Step {
  int index = 0;  // 1-based
  Rule rule = Rule::initial;
  std::string text;
  std::string target;  // clause the rule was applied to
  std::vector<std::string> definitions;
  std::vector<Clause> removed;
  std::vector<Clause> added;
};

struct TransformState {
  Program p0;
  Program current;
  std::vector<std::string> defs;              // Defs, in introduction order
  std::map<std::string, Clause> def_clauses;  // definitions as introduced
  std::map<std::string, ClauseRecord> dag;
  LevelMapping levels;
  LevelMapping pinned;  // explicit levels from the script
  std::set<std::string> p0_preds;
  std::set<std::string> seen_preds;  // predicates occurring in P0..Pk
  std::set<std::string> used_ids;
  int next_id = 1;
  std::vector<Step> steps;

  // P0 together with Defs in their introduced form.
  Program p0_with_defs() const;
  bool is_descendant(const std::string& eta, const std::string& gamma) const;
  const Clause& clause(const std::string& id) const;
};

// Infers the level mapping of p0 (respecting `pinned`); throws when p0 is
// not stratified.
TransformState initial_state(const Program& p0, const LevelMapping& pinned = {});

// R1 for clauses already present in P0: moves them from P0 into Defs.
TransformState assume_definitions(const TransformState& st, const std::vector<std::string>& ids);

// R1. Each entry is (requested id or "", clause text).
TransformState define(const TransformState& st,
                      const std::vector<std::pair<std::string, std::string>>& clauses);
TransformState instantiate(const TransformState& st, const std::string& id, const std::string& var);
TransformState unfold_pos(const TransformState& st, const std::string& id, std::size_t pos);
TransformState unfold_neg(const TransformState& st, const std::string& id, std::size_t pos);
TransformState subsume(const TransformState& st, const std::string& removed,
                       const std::string& by);
TransformState fold_pos(const TransformState& st, const std::string& id, const std::string& def,
                        std::vector<std::size_t> positions);
TransformState fold_neg(const TransformState& st, const std::string& id,
                        const std::vector<std::string>& defs, std::vector<std::size_t> positions);

// Negation of a disjunction of conjunctions, distributed left to right.
std::vector<std::vector<Literal>> negate_to_dnf(const std::vector<std::vector<Literal>>& bodies);

struct Finding {
  int step = 0;
  std::string rule;
  std::string clause;
  std::string condition;  // "1", "2.1", "2.2.i", "2.2.ii", "2", "3"
  bool pass = true;
  std::string detail;
};

struct NuFinding {
  int step = 0;
  std::string parent;
  std::string derived;
  std::size_t parent_positive = 0;
  std::size_t derived_positive = 0;
};

struct AdmissibilityReport {
  bool admissible = true;
  std::vector<Finding> findings;
  std::vector<NuFinding> nu;
  std::string to_string() const;
};

AdmissibilityReport check_admissibility(const TransformState& st);
std::vector<NuFinding> lint_condition_nu(const TransformState& st);

struct RuleInvocation {
  Rule rule = Rule::initial;
  bool assume = false;  // `defs` directive
  std::string clause;
  std::string variable;
  std::vector<std::string> using_ids;
  std::vector<std::size_t> positions;
  std::vector<std::pair<std::string, std::string>> definitions;
  int line = 0;
  std::string text;
};

struct Script {
  std::vector<RuleInvocation> steps;
  LevelMapping levels;
};

struct ScriptError : Error {
  ScriptError(int step, int line, std::string cond, const std::string& msg)
      : Error("step " + std::to_string(step) + " (line " + std::to_string(line) + "): " + msg),
        step(step),
        line(line),
        condition(std::move(cond)) {}
  int step;
  int line;
  std::string condition;
};

Script parse_script(const std::string& text);
std::string render_script(const Script& s);
TransformState apply_invocation(const TransformState& st, const RuleInvocation& inv);
TransformState run_script(const Program& p0, const Script& script);

// Step-by-step program diff.
std::string transcript(const TransformState& st);

}  // namespace omegafold
