#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "omegafold/syntax.hpp"

namespace omegafold {

// Variable name -> term. Bindings respect variable types.
using Substitution = std::map<std::string, Term>;

Term apply_subst(const Term& t, const Substitution& s);
Atom apply_subst(const Atom& a, const Substitution& s);
Literal apply_subst(const Literal& l, const Substitution& s);
std::vector<Literal> apply_subst(const std::vector<Literal>& body, const Substitution& s);
Clause apply_subst(const Clause& c, const Substitution& s);

// Robinson unification with occurs check. Ground lasso terms unify with
// cons cells by unrolling one symbol. Variable-variable pairs bind the
// right-hand variable unless typing forces the other direction.
std::optional<Substitution> mgu(const Atom& a, const Atom& b);
std::optional<Substitution> mgu(const Term& a, const Term& b);

// One-way matching: binds pattern variables only.
std::optional<Substitution> match(const Atom& pattern, const Atom& target,
                                  Substitution start = {});
std::optional<Substitution> match(const std::vector<Literal>& pattern,
                                  const std::vector<Literal>& target, Substitution start = {});

// Fresh variable name derived from `base` (trailing digits stripped).
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

Clause rename_apart(const Clause& c, const std::set<std::string>& avoid);

// Renames variables to short names (X, N, S, then X1, ...) in order of
// first occurrence; purely cosmetic.
Clause tidy_variables(const Clause& c);

// Variables renamed to V1, V2, ... in order of occurrence.
Clause canonical(const Clause& c);
bool variant(const Clause& a, const Clause& b);
// Variant test that also ignores the order of body literals.
bool variant_unordered(const Clause& a, const Clause& b);

}  // namespace omegafold
