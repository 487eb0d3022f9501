#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "omegafold/error.hpp"
#include "omegafold/lasso.hpp"

namespace omegafold {

// elem is a subtype of fterm: alphabet constants may appear wherever a
// finite term is expected, never the other way round.
enum class Type { fterm, elem, ilist };

std::string to_string(Type t);
bool subtype(Type sub, Type super);

class Term {
 public:
  enum class Kind { var, elem, app, cons, lasso };

  static Term var(std::string name, Type type);
  static Term elem(std::string name);
  static Term app(std::string fn, std::vector<Term> args = {});
  static Term cons(Term head, Term tail);
  static Term lasso(LassoWord word);

  Kind kind() const { return n_->kind; }
  bool is_var() const { return kind() == Kind::var; }
  // Variable name, element name or function symbol.
  const std::string& name() const { return n_->name; }
  Type type() const;
  // Function arguments, or {head, tail} for cons.
  const std::vector<Term>& args() const { return n_->args; }
  const Term& head() const { return n_->args[0]; }
  const Term& tail() const { return n_->args[1]; }
  const LassoWord& word() const { return *n_->word; }

  bool ground() const { return n_->ground; }
  std::size_t size() const { return n_->size; }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    Type vtype = Type::fterm;
    std::vector<Term> args;
    std::optional<LassoWord> word;
    bool ground = true;
    std::size_t size = 1;
  };
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

struct Atom {
  std::string pred;
  std::vector<Term> args;
  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Literal {
  bool positive = true;
  Atom atom;
  Literal complement() const { return {!positive, atom}; }
  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

struct Clause {
  std::string id;
  Atom head;
  std::vector<Literal> body;
  friend bool operator==(const Clause&, const Clause&) = default;
};

struct Signature {
  std::vector<std::string> alphabet;
  std::vector<std::pair<std::string, int>> functions;
  std::vector<std::pair<std::string, std::vector<Type>>> predicates;

  bool is_symbol(const std::string& s) const;
  std::optional<int> arity(const std::string& fn) const;
  const std::vector<Type>* pred_types(const std::string& p) const;
  // Position of the ilist argument of p, if any.
  std::optional<std::size_t> ilist_position(const std::string& p) const;

  void add_function(const std::string& fn, int arity);
  void add_predicate(const std::string& p, std::vector<Type> types);
};

struct Program {
  Signature sig;
  std::vector<Clause> clauses;

  const Clause* find(const std::string& id) const;
  // Clauses whose head predicate is p, in program order.
  std::vector<const Clause*> definition(const std::string& p) const;
  std::set<std::string> predicates_used() const;
};

// Variables, in order of first occurrence.
void collect_vars(const Term& t, std::vector<Term>& out);
std::vector<Term> vars_of(const Atom& a);
std::vector<Term> vars_of(const Literal& l);
std::vector<Term> vars_of(const Clause& c);
std::vector<Term> vars_of(const std::vector<Literal>& body);
std::set<std::string> var_names(const std::vector<Term>& vars);
bool occurs(const std::string& var, const Term& t);

// Body variables that do not occur in the head.
std::vector<Term> existential_vars(const Clause& c);

std::string render(const Term& t);
std::string render(const Atom& a);
std::string render(const Literal& l);
std::string render_body(const std::vector<Literal>& body);
// Clause without id label and without the terminating period.
std::string render(const Clause& c);
std::string render_program(const Program& p);

// Type-checks a clause against the signature and returns the clause with
// variable types inferred. Throws TypeError.
Clause typecheck_clause(const Signature& sig, const Clause& c);
void validate_signature(const Signature& sig);

}  // namespace omegafold
