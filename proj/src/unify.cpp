#include "omegafold/unify.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace omegafold {

Term apply_subst(const Term& t, const Substitution& s) {
  if (t.ground() || s.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::var: {
      auto it = s.find(t.name());
      if (it == s.end()) return t;
      if (!subtype(it->second.type(), t.type()))
        throw TypeError("substitution binds " + t.name() + ":" + to_string(t.type()) + " to " +
                        render(it->second) + ":" + to_string(it->second.type()));
      return it->second;
    }
    case Term::Kind::app: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(apply_subst(a, s));
      return Term::app(t.name(), std::move(args));
    }
    case Term::Kind::cons: return Term::cons(apply_subst(t.head(), s), apply_subst(t.tail(), s));
    default: return t;
  }
}

Atom apply_subst(const Atom& a, const Substitution& s) {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(apply_subst(t, s));
  return out;
}

Literal apply_subst(const Literal& l, const Substitution& s) { return {l.positive, apply_subst(l.atom, s)}; }

std::vector<Literal> apply_subst(const std::vector<Literal>& body, const Substitution& s) {
  std::vector<Literal> out;
  out.reserve(body.size());
  for (const auto& l : body) out.push_back(apply_subst(l, s));
  return out;
}

Clause apply_subst(const Clause& c, const Substitution& s) {
  return {c.id, apply_subst(c.head, s), apply_subst(c.body, s)};
}

namespace {

class Unifier {
 public:
  Substitution s;

  bool unify(const Term& x0, const Term& y0) {
    Term x = apply_subst(x0, s);
    Term y = apply_subst(y0, s);
    if (x == y) return true;
    if (x.is_var() && y.is_var()) {
      if (y.type() == Type::elem && x.type() == Type::fterm) return bind(x, y);
      return bind(y, x);
    }
    if (x.is_var()) return bind(x, y);
    if (y.is_var()) return bind(y, x);
    using K = Term::Kind;
    if (x.kind() == K::lasso && y.kind() == K::cons) std::swap(x, y);
    if (x.kind() == K::cons && y.kind() == K::lasso)
      return unify(x.head(), Term::elem(y.word().at(0))) &&
             unify(x.tail(), Term::lasso(y.word().tail()));
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case K::app:
        if (x.name() != y.name() || x.args().size() != y.args().size()) return false;
        [[fallthrough]];
      case K::cons:
        for (std::size_t i = 0; i < x.args().size(); ++i)
          if (!unify(x.args()[i], y.args()[i])) return false;
        return true;
      default: return false;  // distinct elem / lasso constants
    }
  }

 private:
  bool bind(const Term& v, const Term& t) {
    if (!subtype(t.type(), v.type())) return false;
    if (occurs(v.name(), t)) return false;
    Substitution one{{v.name(), t}};
    for (auto& [_, r] : s) r = apply_subst(r, one);
    s.emplace(v.name(), t);
    return true;
  }
};

bool match_term(const Term& p, const Term& t, Substitution& s) {
  using K = Term::Kind;
  switch (p.kind()) {
    case K::var: {
      auto it = s.find(p.name());
      if (it != s.end()) return it->second == t;
      if (!subtype(t.type(), p.type())) return false;
      s.emplace(p.name(), t);
      return true;
    }
    case K::elem:
    case K::lasso: return p == t;
    case K::app:
      if (t.kind() != K::app || t.name() != p.name() || t.args().size() != p.args().size())
        return false;
      break;
    case K::cons:
      if (t.kind() == K::lasso)
        return match_term(p.head(), Term::elem(t.word().at(0)), s) &&
               match_term(p.tail(), Term::lasso(t.word().tail()), s);
      if (t.kind() != K::cons) return false;
      break;
  }
  for (std::size_t i = 0; i < p.args().size(); ++i)
    if (!match_term(p.args()[i], t.args()[i], s)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> mgu(const Term& a, const Term& b) {
  Unifier u;
  if (!u.unify(a, b)) return std::nullopt;
  return u.s;
}

std::optional<Substitution> mgu(const Atom& a, const Atom& b) {
  if (a.pred != b.pred || a.args.size() != b.args.size()) return std::nullopt;
  Unifier u;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!u.unify(a.args[i], b.args[i])) return std::nullopt;
  return u.s;
}

std::optional<Substitution> match(const Atom& pattern, const Atom& target, Substitution start) {
  if (pattern.pred != target.pred || pattern.args.size() != target.args.size())
    return std::nullopt;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_term(pattern.args[i], target.args[i], start)) return std::nullopt;
  return start;
}

std::optional<Substitution> match(const std::vector<Literal>& pattern,
                                  const std::vector<Literal>& target, Substitution start) {
  if (pattern.size() != target.size()) return std::nullopt;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i].positive != target[i].positive) return std::nullopt;
    auto r = match(pattern[i].atom, target[i].atom, std::move(start));
    if (!r) return std::nullopt;
    start = std::move(*r);
  }
  return start;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string b = base;
  while (b.size() > 1 && std::isdigit(static_cast<unsigned char>(b.back()))) b.pop_back();
  for (int k = 1;; ++k) {
    std::string c = b + std::to_string(k);
    if (!taken.count(c)) return c;
  }
}

Clause rename_apart(const Clause& c, const std::set<std::string>& avoid) {
  std::set<std::string> taken = avoid;
  Substitution s;
  for (const auto& v : vars_of(c)) {
    std::string n = fresh_name(v.name(), taken);
    taken.insert(n);
    s.emplace(v.name(), Term::var(n, v.type()));
  }
  return apply_subst(c, s);
}

Clause tidy_variables(const Clause& c) {
  std::set<std::string> taken;
  Substitution s;
  for (const auto& v : vars_of(c)) {
    std::string b = v.name();
    while (b.size() > 1 && std::isdigit(static_cast<unsigned char>(b.back()))) b.pop_back();
    std::string n = taken.count(b) ? fresh_name(b, taken) : b;
    taken.insert(n);
    s.emplace(v.name(), Term::var(n, v.type()));
  }
  return apply_subst(c, s);
}

Clause canonical(const Clause& c) {
  Substitution s;
  int k = 0;
  for (const auto& v : vars_of(c)) s.emplace(v.name(), Term::var("V" + std::to_string(++k), v.type()));
  Clause out = apply_subst(c, s);
  out.id.clear();
  return out;
}

bool variant(const Clause& a, const Clause& b) { return canonical(a) == canonical(b); }

bool variant_unordered(const Clause& a, const Clause& b) {
  if (a.head.pred != b.head.pred || a.body.size() != b.body.size()) return false;
  // bijective renaming found by backtracking over body permutations
  std::function<bool(Substitution, Substitution, std::vector<bool>&, std::size_t)> go;
  auto extend = [](const Atom& x, const Atom& y, Substitution fwd, Substitution bwd)
      -> std::optional<std::pair<Substitution, Substitution>> {
    auto f = match(x, y, std::move(fwd));
    if (!f) return std::nullopt;
    auto g = match(y, x, std::move(bwd));
    if (!g) return std::nullopt;
    for (const auto& [_, t] : *f)
      if (!t.is_var()) return std::nullopt;
    return std::make_pair(*f, *g);
  };
  go = [&](Substitution fwd, Substitution bwd, std::vector<bool>& used, std::size_t i) {
    if (i == a.body.size()) return true;
    for (std::size_t j = 0; j < b.body.size(); ++j) {
      if (used[j] || a.body[i].positive != b.body[j].positive) continue;
      auto r = extend(a.body[i].atom, b.body[j].atom, fwd, bwd);
      if (!r) continue;
      used[j] = true;
      if (go(r->first, r->second, used, i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  auto h = extend(a.head, b.head, {}, {});
  if (!h) return false;
  std::vector<bool> used(b.body.size(), false);
  return go(h->first, h->second, used, 0);
}

}  // namespace omegafold
