#include "omegafold/parser.hpp"

#include <algorithm>
#include <cctype>

namespace omegafold {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Reader {
 public:
  Reader(const std::string& text, Signature& sig, bool may_declare)
      : s_(text), sig_(sig), may_declare_(may_declare) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  void skip() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '%') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool done() {
    skip();
    return i_ >= s_.size();
  }

  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }

  bool accept(const std::string& tok) {
    skip();
    if (s_.compare(i_, tok.size(), tok) != 0) return false;
    // keep ":-" from being read as ':'
    if (tok == ":" && s_.compare(i_, 2, ":-") == 0) return false;
    for (std::size_t k = 0; k < tok.size(); ++k) advance();
    return true;
  }

  void expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
  }

  std::string ident() {
    skip();
    std::size_t j = i_;
    while (j < s_.size() && ident_char(s_[j])) ++j;
    if (j == i_) fail("expected a name");
    std::string out = s_.substr(i_, j - i_);
    while (i_ < j) advance();
    return out;
  }

  // Looks ahead for "name :" (a clause label).
  std::optional<std::string> label() {
    skip();
    std::size_t j = i_;
    while (j < s_.size() && ident_char(s_[j])) ++j;
    if (j == i_) return std::nullopt;
    std::size_t k = j;
    while (k < s_.size() && std::isspace(static_cast<unsigned char>(s_[k]))) ++k;
    if (k < s_.size() && s_[k] == ':' && (k + 1 >= s_.size() || s_[k + 1] != '-')) {
      std::string name = s_.substr(i_, j - i_);
      while (i_ <= k) advance();
      return name;
    }
    return std::nullopt;
  }

  bool keyword(const std::string& kw) {
    skip();
    if (s_.compare(i_, kw.size(), kw) != 0) return false;
    std::size_t j = i_ + kw.size();
    if (j < s_.size() && ident_char(s_[j])) return false;
    for (std::size_t k = 0; k < kw.size(); ++k) advance();
    return true;
  }

  Term term(std::optional<Type> expected, bool allow_lasso) {
    skip();
    char c = peek();
    if (c == '[') {
      advance();
      Term h = term(Type::elem, false);
      expect("|");
      Term t = term(Type::ilist, false);
      expect("]");
      return Term::cons(h, t);
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      std::string v = ident();
      if (v == "_") v = "_G" + std::to_string(++anon_);
      return Term::var(v, Type::fterm);  // retyped by typecheck_clause
    }
    if (allow_lasso && expected == Type::ilist) return lasso();
    std::string name = ident();
    if (sig_.is_symbol(name) && peek() != '(') return Term::elem(name);
    std::vector<Term> args;
    if (accept("(")) {
      do {
        args.push_back(term(Type::fterm, false));
      } while (accept(","));
      expect(")");
    }
    if (!sig_.arity(name)) {
      if (!may_declare_) fail("undeclared function " + name);
      try {
        sig_.add_function(name, static_cast<int>(args.size()));
      } catch (const TypeError& e) {
        fail(e.what());
      }
    }
    return Term::app(name, std::move(args));
  }

  Term lasso() {
    skip();
    std::size_t j = s_.find(")^w", i_);
    if (j == std::string::npos) fail("expected lasso literal u(v)^w");
    std::string raw = s_.substr(i_, j + 3 - i_);
    try {
      LassoWord w = parse_lasso(raw, sig_.alphabet);
      while (i_ < j + 3) advance();
      return Term::lasso(std::move(w));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  Atom atom(bool allow_lasso) {
    Atom a{ident(), {}};
    const auto* types = sig_.pred_types(a.pred);
    if (accept("(")) {
      std::size_t k = 0;
      do {
        std::optional<Type> ex;
        if (types && k < types->size()) ex = (*types)[k];
        a.args.push_back(term(ex, allow_lasso));
        ++k;
      } while (accept(","));
      expect(")");
    }
    return a;
  }

  Literal literal() {
    bool pos = !keyword("not");
    return {pos, atom(false)};
  }

  Clause clause_body(const std::string& id) {
    Clause c{id, atom(false), {}};
    if (accept(":-")) {
      do {
        c.body.push_back(literal());
      } while (accept(","));
    }
    return c;
  }

  std::vector<Type> type_list() {
    std::vector<Type> out;
    if (!accept("(")) return out;
    if (accept(")")) return out;
    do {
      std::string t = ident();
      if (t == "fterm") out.push_back(Type::fterm);
      else if (t == "elem") out.push_back(Type::elem);
      else if (t == "ilist") out.push_back(Type::ilist);
      else fail("unknown type " + t);
    } while (accept(","));
    expect(")");
    return out;
  }

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  const std::string& s_;
  Signature& sig_;
  bool may_declare_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  int anon_ = 0;
};

}  // namespace

Program parse_program(const std::string& text) {
  Program p;
  Reader r(text, p.sig, true);
  bool alphabet_seen = false;
  std::set<std::string> ids;
  std::vector<std::pair<Clause, std::pair<int, int>>> raw;
  while (!r.done()) {
    int line = r.line(), col = r.col();
    if (r.keyword("alphabet")) {
      if (alphabet_seen) r.fail("alphabet declared twice");
      alphabet_seen = true;
      do {
        std::string a = r.ident();
        if (p.sig.arity(a)) r.fail(a + " is already a function symbol");
        if (p.sig.is_symbol(a)) r.fail("alphabet symbol " + a + " repeated");
        p.sig.alphabet.push_back(a);
      } while (r.accept(","));
      r.expect(".");
    } else if (r.keyword("fun")) {
      do {
        std::string f = r.ident();
        r.expect("/");
        std::string n = r.ident();
        if (!std::all_of(n.begin(), n.end(), ::isdigit)) r.fail("arity must be a number");
        try {
          p.sig.add_function(f, std::stoi(n));
        } catch (const TypeError& e) {
          r.fail(e.what());
        }
      } while (r.accept(","));
      r.expect(".");
    } else if (r.keyword("pred")) {
      do {
        std::string name = r.ident();
        auto types = r.type_list();
        try {
          p.sig.add_predicate(name, types);
        } catch (const TypeError& e) {
          r.fail(e.what());
        }
      } while (r.accept(","));
      r.expect(".");
    } else {
      auto lbl = r.label();
      std::string id = lbl ? *lbl : "c" + std::to_string(raw.size() + 1);
      if (!ids.insert(id).second) r.fail("duplicate clause id " + id);
      Clause c = r.clause_body(id);
      r.expect(".");
      raw.push_back({std::move(c), {line, col}});
    }
  }
  validate_signature(p.sig);
  for (auto& [c, pos] : raw) {
    try {
      p.clauses.push_back(typecheck_clause(p.sig, c));
    } catch (const TypeError& e) {
      throw ParseError(e.what(), pos.first, pos.second);
    }
  }
  return p;
}

ParsedClause parse_clause(const Signature& sig, const std::string& text, const std::string& id,
                          bool allow_new_head) {
  Signature local = sig;
  Reader r(text, local, false);
  Clause c = r.clause_body(id);
  r.accept(".");
  if (!r.done()) r.fail("trailing text after clause");
  ParsedClause out;
  if (local.pred_types(c.head.pred) == nullptr) {
    if (!allow_new_head) throw TypeError("undeclared predicate " + c.head.pred);
    // infer head types from the body
    Signature probe = local;
    probe.add_predicate("$head", {});
    Clause body_only{id, Atom{"$head", {}}, c.body};
    Clause typed = typecheck_clause(probe, body_only);
    std::map<std::string, Type> vt;
    for (const auto& v : vars_of(typed)) vt[v.name()] = v.type();
    std::vector<Type> types;
    for (const auto& t : c.head.args) {
      if (t.is_var() && vt.count(t.name())) types.push_back(vt[t.name()]);
      else if (t.is_var()) types.push_back(Type::fterm);
      else types.push_back(t.type());
    }
    local.add_predicate(c.head.pred, types);
    validate_signature(local);
    out.new_predicate = std::make_pair(c.head.pred, types);
  }
  out.clause = typecheck_clause(local, c);
  return out;
}

Atom parse_ground_atom(const Signature& sig, const std::string& text) {
  Signature local = sig;
  Reader r(text, local, false);
  Atom a = r.atom(true);
  if (!r.done()) r.fail("trailing text after atom");
  Clause probe = typecheck_clause(local, Clause{"query", a, {}});
  for (const auto& t : probe.head.args)
    if (!t.ground()) throw TypeError("query atom " + render(a) + " is not ground");
  return probe.head;
}

}  // namespace omegafold
