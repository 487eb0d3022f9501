#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "omegafold/lasso.hpp"
#include "omegafold/strata.hpp"
#include "omegafold/syntax.hpp"

namespace omegafold {

struct MonadicProgram;
struct TransformState;

// Suffix classes of a lasso word: indices 0..|u|+|v|-1.
struct SuffixIndex {
  explicit SuffixIndex(const LassoWord& w) : word(w) {}
  LassoWord word;
  std::size_t size() const { return word.positions(); }
  std::size_t next(std::size_t i) const { return word.next(i); }
};

struct ThreeValued {
  enum class Value { true_, false_, unknown };
  Value value = Value::unknown;
  int bound = 0;  // depth bound that was exhausted when value is unknown

  static ThreeValued yes() { return {Value::true_, 0}; }
  static ThreeValued no() { return {Value::false_, 0}; }
  static ThreeValued unknown(int b) { return {Value::unknown, b}; }
  bool is_true() const { return value == Value::true_; }
  bool is_false() const { return value == Value::false_; }
  bool definite() const { return value != Value::unknown; }
  std::string to_string() const;
  friend bool operator==(const ThreeValued& a, const ThreeValued& b) { return a.value == b.value; }
};

// Least model stratum by stratum. Literals over non-propositional
// predicates are delegated to `external`; without it they are an error.
std::set<std::string> propositional_perfect_model(
    const Program& p, const LevelMapping& lm,
    const std::function<bool(const Literal&)>& external = nullptr);

// Exact membership of pred(w) in the perfect model of a monadic program.
bool eval_monadic_lasso(const MonadicProgram& t, const std::string& pred, const LassoWord& w);

// Depth-bounded proof-tree search. Definite answers are exact; unknown
// means the bound was hit or a negative literal floundered.
ThreeValued eval_bounded(const Program& p, const Atom& query, int depth);

struct DifferentialEntry {
  Atom query;
  ThreeValued before;  // on P0 together with the definitions
  ThreeValued after;   // on the current program
  bool conflict() const { return before.definite() && after.definite() && !(before == after); }
};

struct DifferentialReport {
  std::vector<DifferentialEntry> entries;
  std::size_t conflicts() const;
  std::size_t unknowns() const;
  std::string to_string() const;
};

DifferentialReport differential_check(const TransformState& st, const std::vector<Atom>& queries,
                                      int depth);

}  // namespace omegafold
