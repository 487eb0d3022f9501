#include <algorithm>
#include <map>
#include <set>

#include "omegafold/frontends.hpp"
#include "omegafold/parser.hpp"

namespace omegafold {

namespace {

using Kind = Regex::Kind;

RegexPtr node(Kind k, std::vector<RegexPtr> kids, std::string sym = {}) {
  auto r = std::make_shared<Regex>();
  r->kind = k;
  r->kids = std::move(kids);
  r->symbol = std::move(sym);
  return r;
}

class RegexReader {
 public:
  explicit RegexReader(const std::string& s) : s_(s) {}

  RegexPtr parse() {
    RegexPtr r = sum();
    skip();
    if (i_ < s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("regex: " + msg, 1, static_cast<int>(i_) + 1);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool at_atom() {
    skip();
    return i_ < s_.size() && (s_[i_] == '(' || std::islower(static_cast<unsigned char>(s_[i_])));
  }

  RegexPtr sum() {
    RegexPtr r = seq();
    while (true) {
      skip();
      if (i_ < s_.size() && s_[i_] == '+') {
        ++i_;
        r = node(Kind::alt, {r, seq()});
      } else {
        return r;
      }
    }
  }

  RegexPtr seq() {
    if (!at_atom()) fail("expected a symbol or '('");
    RegexPtr r = postfix();
    while (at_atom()) r = node(Kind::cat, {r, postfix()});
    return r;
  }

  RegexPtr postfix() {
    RegexPtr r = atom();
    while (true) {
      skip();
      if (i_ < s_.size() && s_[i_] == '*') {
        ++i_;
        r = node(Kind::star, {r});
      } else if (s_.compare(i_, 2, "^w") == 0) {
        i_ += 2;
        r = node(Kind::omega, {r});
      } else if (s_.compare(i_, 3, "^\xcf\x89") == 0) {  // ^ω
        i_ += 3;
        r = node(Kind::omega, {r});
      } else {
        return r;
      }
    }
  }

  RegexPtr atom() {
    skip();
    if (s_[i_] == '(') {
      ++i_;
      RegexPtr r = sum();
      skip();
      if (i_ >= s_.size() || s_[i_] != ')') fail("expected ')'");
      ++i_;
      return r;
    }
    char c = s_[i_];
    if (c == 's') fail("symbol 's' is reserved for the successor function");
    ++i_;
    return node(Kind::symbol, {}, std::string(1, c));
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

bool regular(const RegexPtr& r) {
  if (r->kind == Kind::omega) return false;
  return std::all_of(r->kids.begin(), r->kids.end(), regular);
}

// e^w, e1 e2^w, or a sum of those. A concatenation ending in a bracketed
// omega expression is reassociated: e (e1 e2^w) = (e e1) e2^w.
RegexPtr omega_shape(const RegexPtr& r) {
  switch (r->kind) {
    case Kind::omega:
      if (regular(r->kids[0])) return r;
      break;
    case Kind::alt: {
      auto a = omega_shape(r->kids[0]);
      auto b = omega_shape(r->kids[1]);
      if (a && b) return node(Kind::alt, {a, b});
      break;
    }
    case Kind::cat: {
      if (!regular(r->kids[0])) break;
      auto rhs = r->kids[1];
      if (rhs->kind == Kind::omega && regular(rhs->kids[0])) return r;
      if (rhs->kind == Kind::cat) {
        auto inner = omega_shape(rhs);
        if (inner && inner->kind == Kind::cat)
          return node(Kind::cat, {node(Kind::cat, {r->kids[0], inner->kids[0]}), inner->kids[1]});
      }
      break;
    }
    default:
      break;
  }
  return nullptr;
}

void collect_symbols(const RegexPtr& r, std::set<std::string>& out) {
  if (r->kind == Kind::symbol) out.insert(r->symbol);
  for (const auto& k : r->kids) collect_symbols(k, out);
}

int prec(const RegexPtr& r) {
  switch (r->kind) {
    case Kind::alt:
      return 0;
    case Kind::cat:
      return 1;
    default:
      return 2;
  }
}

std::string show(const RegexPtr& r, int ctx) {
  std::string s;
  switch (r->kind) {
    case Kind::symbol:
      s = r->symbol;
      break;
    case Kind::alt:
      s = show(r->kids[0], 0) + "+" + show(r->kids[1], 0);
      break;
    case Kind::cat:
      s = show(r->kids[0], 1) + show(r->kids[1], 1);
      break;
    case Kind::star:
      s = show(r->kids[0], 2) + "*";
      break;
    case Kind::omega:
      s = show(r->kids[0], 2) + "^w";
      break;
  }
  return prec(r) < ctx ? "(" + s + ")" : s;
}

// Position automaton of a regular expression: state 0 is initial, state i
// (1-based) reads the symbol at position i.
struct Positions {
  std::vector<std::string> symbol{""};
  std::vector<std::set<int>> follow{{}};
};

struct Info {
  bool nullable = false;
  std::set<int> first, last;
};

Info glushkov(const RegexPtr& r, Positions& p) {
  switch (r->kind) {
    case Kind::symbol: {
      int i = static_cast<int>(p.symbol.size());
      p.symbol.push_back(r->symbol);
      p.follow.emplace_back();
      return {false, {i}, {i}};
    }
    case Kind::alt: {
      Info a = glushkov(r->kids[0], p), b = glushkov(r->kids[1], p);
      a.nullable = a.nullable || b.nullable;
      a.first.insert(b.first.begin(), b.first.end());
      a.last.insert(b.last.begin(), b.last.end());
      return a;
    }
    case Kind::cat: {
      Info a = glushkov(r->kids[0], p), b = glushkov(r->kids[1], p);
      for (int x : a.last) p.follow[x].insert(b.first.begin(), b.first.end());
      Info out;
      out.nullable = a.nullable && b.nullable;
      out.first = a.first;
      if (a.nullable) out.first.insert(b.first.begin(), b.first.end());
      out.last = b.last;
      if (b.nullable) out.last.insert(a.last.begin(), a.last.end());
      return out;
    }
    case Kind::star: {
      Info a = glushkov(r->kids[0], p);
      for (int x : a.last) p.follow[x].insert(a.first.begin(), a.first.end());
      a.nullable = true;
      return a;
    }
    case Kind::omega:
      break;
  }
  throw Error("regex: omega inside a regular expression");
}

struct Nfa {
  Positions pos;
  Info info;
  std::set<int> step(const std::set<int>& from, const std::string& a) const {
    std::set<int> out;
    for (int q : from) {
      const std::set<int>& next = q == 0 ? info.first : pos.follow[q];
      for (int t : next)
        if (pos.symbol[t] == a) out.insert(t);
    }
    return out;
  }
  bool accepting(int q) const { return q == 0 ? info.nullable : info.last.count(q) > 0; }
};

Nfa make_nfa(const RegexPtr& e) {
  Nfa n;
  n.info = glushkov(e, n.pos);
  return n;
}

// Builder with string-named states; `tag` keeps sub-automata apart.
struct Builder {
  BuchiAutomaton a;
  std::set<std::string> finals;
  void state(const std::string& q) {
    if (std::find(a.states.begin(), a.states.end(), q) == a.states.end()) a.states.push_back(q);
  }
  void edge(const std::string& p, const std::string& s, const std::string& q) {
    state(p);
    state(q);
    std::tuple<std::string, std::string, std::string> t{p, s, q};
    if (std::find(a.transitions.begin(), a.transitions.end(), t) == a.transitions.end())
      a.transitions.push_back(t);
  }
};

// Deterministic automaton for L(e*); Buchi-accepting on subsets holding an
// accepting position, i.e. infinitely many prefixes lie in L(e*).
// Returns the initial state name.
std::string add_limit(Builder& b, const RegexPtr& e, const std::vector<std::string>& sigma,
                      const std::string& tag) {
  Nfa n = make_nfa(node(Kind::star, {e}));
  std::map<std::set<int>, int> ids;
  std::vector<std::set<int>> todo{{0}};
  ids[{0}] = 0;
  auto name = [&](int i) { return tag + "d" + std::to_string(i); };
  b.state(name(0));
  for (std::size_t k = 0; k < todo.size(); ++k) {
    std::set<int> cur = todo[k];
    int cid = ids.at(cur);
    if (std::any_of(cur.begin(), cur.end(), [&](int q) { return n.accepting(q); }))
      b.finals.insert(name(cid));
    for (const auto& s : sigma) {
      std::set<int> nxt = n.step(cur, s);
      auto [it, fresh] = ids.emplace(nxt, static_cast<int>(ids.size()));
      if (fresh) todo.push_back(nxt);
      b.edge(name(cid), s, name(it->second));
    }
  }
  return name(0);
}

std::string add_omega(Builder& b, const RegexPtr& f, const std::vector<std::string>& sigma,
                      const std::string& tag) {
  if (f->kind == Kind::omega) return add_limit(b, f->kids[0], sigma, tag);
  if (f->kind == Kind::alt) {
    std::string init = tag + "u";
    b.state(init);
    std::string l = add_omega(b, f->kids[0], sigma, tag + "l");
    std::string r = add_omega(b, f->kids[1], sigma, tag + "r");
    BuchiAutomaton snapshot = b.a;
    for (const auto& [p, s, q] : snapshot.transitions)
      if (p == l || p == r) b.edge(init, s, q);
    return init;
  }
  // cat(e1, omega(e2)): prefix in L(e1) via its position automaton, then
  // the limit automaton of e2.
  Nfa n = make_nfa(f->kids[0]);
  std::string tail = add_limit(b, f->kids[1]->kids[0], sigma, tag + "t");
  auto name = [&](int i) { return tag + "p" + std::to_string(i); };
  BuchiAutomaton snapshot = b.a;
  std::vector<std::pair<std::string, std::string>> tail_out;
  for (const auto& [p, s, q] : snapshot.transitions)
    if (p == tail) tail_out.emplace_back(s, q);
  b.state(name(0));
  for (int q = 0; q < static_cast<int>(n.pos.symbol.size()); ++q) {
    for (const auto& s : sigma)
      for (int t : n.step({q}, s)) b.edge(name(q), s, name(t));
    if (n.accepting(q))
      for (const auto& [s, t] : tail_out) b.edge(name(q), s, t);
  }
  return name(0);
}

}  // namespace

RegexPtr parse_omega_regex(const std::string& text) {
  RegexPtr r = RegexReader(text).parse();
  RegexPtr shaped = omega_shape(r);
  if (!shaped)
    throw ParseError("regex: '" + text + "' is not of the form e^w, e1 e2^w or f1+f2", 1, 1);
  return shaped;
}

std::string to_string(const RegexPtr& r) { return show(r, 0); }

std::vector<std::string> regex_symbols(const RegexPtr& r) {
  std::set<std::string> s;
  collect_symbols(r, s);
  return {s.begin(), s.end()};
}

Term reify_regex(const RegexPtr& r) {
  switch (r->kind) {
    case Kind::symbol:
      return Term::elem(r->symbol);
    case Kind::cat:
      return Term::app("cat", {reify_regex(r->kids[0]), reify_regex(r->kids[1])});
    case Kind::alt:
      return Term::app("alt", {reify_regex(r->kids[0]), reify_regex(r->kids[1])});
    case Kind::star:
      return Term::app("star", {reify_regex(r->kids[0])});
    case Kind::omega:
      return Term::app("omega", {reify_regex(r->kids[0])});
  }
  throw Error("regex: bad node");
}

BuchiAutomaton regex_automaton(const RegexPtr& f, const std::vector<std::string>& sigma) {
  Builder b;
  b.a.sigma = sigma;
  b.a.initial = add_omega(b, f, sigma, "");
  // Keep only states reachable from the initial one, renamed n0, n1, ...
  std::map<std::string, std::string> rename;
  std::vector<std::string> order{b.a.initial};
  rename[b.a.initial] = "n0";
  for (std::size_t k = 0; k < order.size(); ++k)
    for (const auto& [p, s, q] : b.a.transitions)
      if (p == order[k] && !rename.count(q)) {
        rename[q] = "n" + std::to_string(rename.size());
        order.push_back(q);
      }
  BuchiAutomaton out;
  out.sigma = sigma;
  out.initial = "n0";
  for (const auto& q : order) {
    out.states.push_back(rename[q]);
    if (b.finals.count(q)) out.finals.push_back(rename[q]);
  }
  for (const auto& [p, s, q] : b.a.transitions)
    if (rename.count(p)) out.transitions.emplace_back(rename[p], s, rename[q]);
  return out;
}

bool regex_accepts(const RegexPtr& f, const LassoWord& w, const std::vector<std::string>& sigma) {
  return buchi_accepts(regex_automaton(f, sigma), w);
}

Encoding encode_containment(const RegexPtr& f1, const RegexPtr& f2,
                            const std::vector<std::string>& sigma) {
  for (const auto& r : {f1, f2})
    for (const auto& s : regex_symbols(r))
      if (std::find(sigma.begin(), sigma.end(), s) == sigma.end())
        throw Error("regex: symbol '" + s + "' is not in the alphabet");
  std::string alpha;
  for (std::size_t i = 0; i < sigma.size(); ++i) alpha += (i ? ", " : "") + sigma[i];
  std::string t = "alphabet " + alpha + ".\n";
  t +=
      "fun 0/0, s/1, nil/0, cons/2, cat/2, alt/2, star/1, omega/1.\n"
      "pred acc(fterm, fterm), app(fterm, fterm, fterm), wacc(fterm, ilist),\n"
      "     wacc1(fterm, fterm, ilist), new1(fterm, ilist), new2(fterm, fterm, ilist),\n"
      "     geq(fterm, fterm), nat(fterm), prefix(ilist, fterm, fterm), symb(elem),\n"
      "     expr1(ilist), expr2(ilist), not_contained(ilist).\n"
      "acc(E, cons(E, nil)) :- symb(E).\n"
      "acc(cat(E1, E2), X) :- app(X1, X2, X), acc(E1, X1), acc(E2, X2).\n"
      "acc(alt(E1, E2), X) :- acc(E1, X).\n"
      "acc(alt(E1, E2), X) :- acc(E2, X).\n"
      "acc(star(E), nil).\n"
      "acc(star(E), X) :- app(X1, X2, X), acc(E, X1), acc(star(E), X2).\n"
      "wacc(alt(F1, F2), X) :- wacc(F1, X).\n"
      "wacc(alt(F1, F2), X) :- wacc(F2, X).\n"
      "wacc(omega(E), X) :- not new1(E, X).\n"
      "wacc(cat(E1, omega(E2)), X) :- prefix(X, N, X1), acc(E1, X1), wacc1(omega(E2), X1, X).\n"
      "new1(E, X) :- nat(M), not new2(E, M, X).\n"
      "new2(E, M, X) :- geq(N, M), prefix(X, N, V), acc(star(E), V).\n"
      "wacc1(E, nil, X) :- wacc(E, X).\n"
      "wacc1(E, cons(H, T), [H|X]) :- wacc1(E, T, X).\n"
      "geq(N, 0).\n"
      "geq(s(N), s(M)) :- geq(N, M).\n"
      "nat(0).\n"
      "nat(s(N)) :- nat(N).\n"
      "prefix(X, 0, nil).\n"
      "prefix([S|X], s(N), cons(S, Y)) :- prefix(X, N, Y).\n"
      "app(nil, Y, Y).\n"
      "app(cons(S, X), Y, cons(S, Z)) :- app(X, Y, Z).\n";
  t += "expr1(X) :- wacc(" + render(reify_regex(f1)) + ", X).\n";
  t += "expr2(X) :- wacc(" + render(reify_regex(f2)) + ", X).\n";
  t += "not_contained(X) :- expr1(X), not expr2(X).\n";
  for (const auto& s : sigma) t += "symb(" + s + ").\n";
  return {parse_program(t), "not_contained"};
}

}  // namespace omegafold
