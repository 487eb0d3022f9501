#pragma once

#include <optional>
#include <string>

#include "omegafold/syntax.hpp"

namespace omegafold {

// Parses a program file. Undeclared lowercase names used as terms are
// declared as function symbols with the arity of their first use.
Program parse_program(const std::string& text);

struct ParsedClause {
  Clause clause;
  // Set when the head predicate was not declared and its argument types
  // were inferred from the body.
  std::optional<std::pair<std::string, std::vector<Type>>> new_predicate;
};

// Parses a single clause (trailing '.' optional) against a fixed signature.
ParsedClause parse_clause(const Signature& sig, const std::string& text, const std::string& id,
                          bool allow_new_head);

// Parses a ground atom; ilist arguments are lasso literals "u(v)^w".
Atom parse_ground_atom(const Signature& sig, const std::string& text);

}  // namespace omegafold
