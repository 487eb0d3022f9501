#include "omegafold/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace omegafold {

std::string to_string(Type t) {
  switch (t) {
    case Type::fterm: return "fterm";
    case Type::elem: return "elem";
    case Type::ilist: return "ilist";
  }
  return "?";
}

bool subtype(Type sub, Type super) {
  return sub == super || (sub == Type::elem && super == Type::fterm);
}

Term Term::var(std::string name, Type type) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::var;
  n->name = std::move(name);
  n->vtype = type;
  n->ground = false;
  return Term(std::move(n));
}

Term Term::elem(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::elem;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::app(std::string fn, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::app;
  n->name = std::move(fn);
  for (const auto& a : args) {
    n->ground = n->ground && a.ground();
    n->size += a.size();
  }
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::cons(Term head, Term tail) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::cons;
  n->ground = head.ground() && tail.ground();
  n->size = 1 + head.size() + tail.size();
  n->args = {std::move(head), std::move(tail)};
  return Term(std::move(n));
}

Term Term::lasso(LassoWord word) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::lasso;
  n->size = word.positions();
  n->word = std::move(word);
  return Term(std::move(n));
}

Type Term::type() const {
  switch (kind()) {
    case Kind::var: return n_->vtype;
    case Kind::elem: return Type::elem;
    case Kind::app: return Type::fterm;
    case Kind::cons:
    case Kind::lasso: return Type::ilist;
  }
  return Type::fterm;
}

bool operator==(const Term& a, const Term& b) {
  if (a.n_ == b.n_) return true;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.n_ == b.n_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Term::Kind::var:
      if (auto c = a.name() <=> b.name(); c != 0) return c;
      return a.n_->vtype <=> b.n_->vtype;
    case Term::Kind::elem: return a.name() <=> b.name();
    case Term::Kind::lasso: {
      const auto& x = a.word();
      const auto& y = b.word();
      if (x < y) return std::strong_ordering::less;
      if (y < x) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    }
    case Term::Kind::app:
      if (auto c = a.name() <=> b.name(); c != 0) return c;
      [[fallthrough]];
    case Term::Kind::cons: {
      if (auto c = a.args().size() <=> b.args().size(); c != 0) return c;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (auto c = a.args()[i] <=> b.args()[i]; c != 0) return c;
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

// ---- signature / program ----

bool Signature::is_symbol(const std::string& s) const {
  return std::find(alphabet.begin(), alphabet.end(), s) != alphabet.end();
}

std::optional<int> Signature::arity(const std::string& fn) const {
  for (const auto& [f, n] : functions)
    if (f == fn) return n;
  return std::nullopt;
}

const std::vector<Type>* Signature::pred_types(const std::string& p) const {
  for (const auto& [q, ts] : predicates)
    if (q == p) return &ts;
  return nullptr;
}

std::optional<std::size_t> Signature::ilist_position(const std::string& p) const {
  const auto* ts = pred_types(p);
  if (ts == nullptr) return std::nullopt;
  for (std::size_t i = 0; i < ts->size(); ++i)
    if ((*ts)[i] == Type::ilist) return i;
  return std::nullopt;
}

void Signature::add_function(const std::string& fn, int n) {
  if (auto a = arity(fn)) {
    if (*a != n) throw TypeError("function " + fn + " used with arity " + std::to_string(n) +
                                 " but declared with arity " + std::to_string(*a));
    return;
  }
  if (is_symbol(fn)) throw TypeError("name " + fn + " is both an alphabet symbol and a function");
  functions.emplace_back(fn, n);
}

void Signature::add_predicate(const std::string& p, std::vector<Type> types) {
  if (const auto* ts = pred_types(p)) {
    if (*ts != types) throw TypeError("predicate " + p + " declared twice with different types");
    return;
  }
  predicates.emplace_back(p, std::move(types));
}

void validate_signature(const Signature& sig) {
  std::set<std::string> seen;
  for (const auto& a : sig.alphabet)
    if (!seen.insert(a).second) throw TypeError("alphabet symbol " + a + " repeated");
  for (const auto& [f, n] : sig.functions) {
    if (sig.is_symbol(f)) throw TypeError("name " + f + " is both an alphabet symbol and a function");
    if (n < 0) throw TypeError("negative arity for " + f);
  }
  for (const auto& [p, ts] : sig.predicates) {
    auto k = std::count(ts.begin(), ts.end(), Type::ilist);
    if (k > 1) throw TypeError("predicate " + p + " has " + std::to_string(k) + " ilist arguments");
    if (std::find(ts.begin(), ts.end(), Type::ilist) != ts.end() ||
        std::find(ts.begin(), ts.end(), Type::elem) != ts.end()) {
      if (sig.alphabet.empty())
        throw TypeError("predicate " + p + " uses elem/ilist but no alphabet is declared");
    }
  }
}

const Clause* Program::find(const std::string& id) const {
  for (const auto& c : clauses)
    if (c.id == id) return &c;
  return nullptr;
}

std::vector<const Clause*> Program::definition(const std::string& p) const {
  std::vector<const Clause*> out;
  for (const auto& c : clauses)
    if (c.head.pred == p) out.push_back(&c);
  return out;
}

std::set<std::string> Program::predicates_used() const {
  std::set<std::string> out;
  for (const auto& c : clauses) {
    out.insert(c.head.pred);
    for (const auto& l : c.body) out.insert(l.atom.pred);
  }
  return out;
}

// ---- variables ----

void collect_vars(const Term& t, std::vector<Term>& out) {
  if (t.is_var()) {
    for (const auto& v : out)
      if (v.name() == t.name()) return;
    out.push_back(t);
    return;
  }
  if (t.ground()) return;
  for (const auto& a : t.args()) collect_vars(a, out);
}

std::vector<Term> vars_of(const Atom& a) {
  std::vector<Term> out;
  for (const auto& t : a.args) collect_vars(t, out);
  return out;
}

std::vector<Term> vars_of(const Literal& l) { return vars_of(l.atom); }

std::vector<Term> vars_of(const std::vector<Literal>& body) {
  std::vector<Term> out;
  for (const auto& l : body)
    for (const auto& t : l.atom.args) collect_vars(t, out);
  return out;
}

std::vector<Term> vars_of(const Clause& c) {
  std::vector<Term> out;
  for (const auto& t : c.head.args) collect_vars(t, out);
  for (const auto& l : c.body)
    for (const auto& t : l.atom.args) collect_vars(t, out);
  return out;
}

std::set<std::string> var_names(const std::vector<Term>& vars) {
  std::set<std::string> out;
  for (const auto& v : vars) out.insert(v.name());
  return out;
}

bool occurs(const std::string& var, const Term& t) {
  if (t.is_var()) return t.name() == var;
  if (t.ground()) return false;
  for (const auto& a : t.args())
    if (occurs(var, a)) return true;
  return false;
}

std::vector<Term> existential_vars(const Clause& c) {
  const auto head = var_names(vars_of(c.head));
  std::vector<Term> out;
  for (const auto& v : vars_of(c.body))
    if (!head.count(v.name())) out.push_back(v);
  return out;
}

// ---- rendering ----

std::string render(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::var:
    case Term::Kind::elem: return t.name();
    case Term::Kind::lasso: return t.word().to_string();
    case Term::Kind::cons: return "[" + render(t.head()) + "|" + render(t.tail()) + "]";
    case Term::Kind::app: {
      if (t.args().empty()) return t.name();
      std::string s = t.name() + "(";
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) s += ",";
        s += render(t.args()[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

std::string render(const Atom& a) {
  if (a.args.empty()) return a.pred;
  std::string s = a.pred + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    s += render(a.args[i]);
  }
  return s + ")";
}

std::string render(const Literal& l) { return (l.positive ? "" : "not ") + render(l.atom); }

std::string render_body(const std::vector<Literal>& body) {
  std::string s;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) s += ", ";
    s += render(body[i]);
  }
  return s;
}

std::string render(const Clause& c) {
  if (c.body.empty()) return render(c.head);
  return render(c.head) + " :- " + render_body(c.body);
}

std::string render_program(const Program& p) {
  std::ostringstream out;
  if (!p.sig.alphabet.empty()) {
    out << "alphabet ";
    for (std::size_t i = 0; i < p.sig.alphabet.size(); ++i)
      out << (i ? ", " : "") << p.sig.alphabet[i];
    out << ".\n";
  }
  if (!p.sig.functions.empty()) {
    out << "fun ";
    for (std::size_t i = 0; i < p.sig.functions.size(); ++i)
      out << (i ? ", " : "") << p.sig.functions[i].first << "/" << p.sig.functions[i].second;
    out << ".\n";
  }
  for (const auto& [name, types] : p.sig.predicates) {
    out << "pred " << name;
    if (!types.empty()) {
      out << "(";
      for (std::size_t i = 0; i < types.size(); ++i) out << (i ? ", " : "") << to_string(types[i]);
      out << ")";
    }
    out << ".\n";
  }
  bool default_ids = true;
  for (std::size_t i = 0; i < p.clauses.size(); ++i)
    default_ids = default_ids && p.clauses[i].id == "c" + std::to_string(i + 1);
  for (const auto& c : p.clauses) {
    if (!default_ids) out << c.id << ": ";
    out << render(c) << ".\n";
  }
  return out.str();
}

// ---- typechecking ----

namespace {

struct VarTypes {
  std::map<std::string, std::set<Type>> need;

  void scan(const Signature& sig, const Term& t, Type expected, const std::string& where) {
    switch (t.kind()) {
      case Term::Kind::var:
        need[t.name()].insert(expected);
        return;
      case Term::Kind::elem:
        if (!sig.is_symbol(t.name()))
          throw TypeError(where + ": " + t.name() + " is not an alphabet symbol");
        if (!subtype(Type::elem, expected))
          throw TypeError(where + ": element " + t.name() + " used at " + to_string(expected) +
                          " position");
        return;
      case Term::Kind::app: {
        auto n = sig.arity(t.name());
        if (!n) throw TypeError(where + ": undeclared function " + t.name());
        if (static_cast<std::size_t>(*n) != t.args().size())
          throw TypeError(where + ": function " + t.name() + " expects " + std::to_string(*n) +
                          " arguments");
        if (expected != Type::fterm)
          throw TypeError(where + ": term " + render(t) + " used at " + to_string(expected) +
                          " position");
        for (const auto& a : t.args()) scan(sig, a, Type::fterm, where);
        return;
      }
      case Term::Kind::cons:
        if (expected != Type::ilist)
          throw TypeError(where + ": list " + render(t) + " used at " + to_string(expected) +
                          " position");
        scan(sig, t.head(), Type::elem, where);
        scan(sig, t.tail(), Type::ilist, where);
        return;
      case Term::Kind::lasso:
        if (expected != Type::ilist)
          throw TypeError(where + ": lasso used at " + to_string(expected) + " position");
        for (const auto& s : t.word().prefix())
          if (!sig.is_symbol(s)) throw TypeError(where + ": " + s + " is not an alphabet symbol");
        for (const auto& s : t.word().period())
          if (!sig.is_symbol(s)) throw TypeError(where + ": " + s + " is not an alphabet symbol");
        return;
    }
  }

  void scan_atom(const Signature& sig, const Atom& a, const std::string& where) {
    const auto* ts = sig.pred_types(a.pred);
    if (ts == nullptr) throw TypeError(where + ": undeclared predicate " + a.pred);
    if (ts->size() != a.args.size())
      throw TypeError(where + ": predicate " + a.pred + " expects " + std::to_string(ts->size()) +
                      " arguments, got " + std::to_string(a.args.size()));
    for (std::size_t i = 0; i < a.args.size(); ++i) scan(sig, a.args[i], (*ts)[i], where);
  }
};

Term retype(const Term& t, const std::map<std::string, Type>& types) {
  switch (t.kind()) {
    case Term::Kind::var: return Term::var(t.name(), types.at(t.name()));
    case Term::Kind::app: {
      if (t.ground()) return t;
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(retype(a, types));
      return Term::app(t.name(), std::move(args));
    }
    case Term::Kind::cons: return Term::cons(retype(t.head(), types), retype(t.tail(), types));
    default: return t;
  }
}

Atom retype(const Atom& a, const std::map<std::string, Type>& types) {
  Atom out{a.pred, {}};
  for (const auto& t : a.args) out.args.push_back(retype(t, types));
  return out;
}

}  // namespace

Clause typecheck_clause(const Signature& sig, const Clause& c) {
  const std::string where = "clause " + c.id;
  VarTypes vt;
  vt.scan_atom(sig, c.head, where);
  for (const auto& l : c.body) vt.scan_atom(sig, l.atom, where);
  std::map<std::string, Type> types;
  for (const auto& [v, need] : vt.need) {
    if (need.count(Type::ilist) && need.size() > 1)
      throw TypeError(where + ": variable " + v + " used both as ilist and as finite term");
    if (need.count(Type::ilist)) types[v] = Type::ilist;
    else if (need.count(Type::elem)) types[v] = Type::elem;
    else types[v] = Type::fterm;
  }
  Clause out{c.id, retype(c.head, types), {}};
  for (const auto& l : c.body) out.body.push_back({l.positive, retype(l.atom, types)});
  return out;
}

}  // namespace omegafold
