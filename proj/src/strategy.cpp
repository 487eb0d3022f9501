#include "omegafold/strategy.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "omegafold/unify.hpp"

namespace omegafold {

Program reachable_slice(const Program& p, const std::string& pred) {
  std::set<std::string> seen{pred};
  std::vector<std::string> todo{pred};
  while (!todo.empty()) {
    std::string cur = todo.back();
    todo.pop_back();
    for (const auto& c : p.clauses)
      if (c.head.pred == cur)
        for (const auto& l : c.body)
          if (seen.insert(l.atom.pred).second) todo.push_back(l.atom.pred);
  }
  Program out;
  out.sig = p.sig;
  out.sig.predicates.clear();
  for (const auto& decl : p.sig.predicates)
    if (seen.count(decl.first)) out.sig.predicates.push_back(decl);
  for (const auto& c : p.clauses)
    if (seen.count(c.head.pred)) out.clauses.push_back(c);
  return out;
}

namespace {

struct Failure : Error {
  using Error::Error;
};

// Per body position: the atoms whose unfolding introduced the literal.
using Ancestry = std::vector<std::vector<Atom>>;

bool embeds(const Term& a, const Term& b) {
  if (a.is_var() && b.is_var()) return true;
  if (!b.is_var())
    for (const auto& arg : b.args())
      if (embeds(a, arg)) return true;
  if (a.is_var() || b.is_var() || a.kind() != b.kind() || a.name() != b.name() ||
      a.args().size() != b.args().size())
    return false;
  if (a.kind() == Term::Kind::lasso) return a == b;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!embeds(a.args()[i], b.args()[i])) return false;
  return true;
}

bool embeds(const Atom& a, const Atom& b) {
  if (a.pred != b.pred || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!embeds(a.args[i], b.args[i])) return false;
  return true;
}

class Deriver {
 public:
  Deriver(const Program& p, std::string query, const LevelMapping& pins,
          const StrategyOptions& opts)
      : query_(std::move(query)), opts_(opts) {
    st_ = initial_state(p, pins);
    script_.levels = pins;
  }

  void run() {
    assume_candidate_definitions();
    process(query_);
    while (!pending_.empty()) {
      std::string p = pending_.front();
      pending_.pop_front();
      process(p);
    }
  }

  TransformState st_;
  Script script_;
  std::size_t introduced_ = 0;

 private:
  // ---- rule application -------------------------------------------------

  std::vector<std::string> apply(RuleInvocation inv) {
    if (++steps_ > opts_.max_steps) throw Failure("step budget exhausted");
    inv.text = render_script(Script{{inv}, {}});
    if (!inv.text.empty() && inv.text.back() == '\n') inv.text.pop_back();
    st_ = apply_invocation(st_, inv);
    inv.line = static_cast<int>(script_.steps.size() + 1);
    script_.steps.push_back(inv);
    std::vector<std::string> out;
    for (const auto& c : st_.steps.back().added) out.push_back(c.id);
    return out;
  }

  static RuleInvocation make(Rule r, const std::string& clause) {
    RuleInvocation inv;
    inv.rule = r;
    inv.clause = clause;
    return inv;
  }

  bool exists(const std::string& id) const { return st_.current.find(id) != nullptr; }

  Ancestry ancestry(const std::string& id) {
    const Clause& c = st_.clause(id);
    auto it = anc_.find(id);
    if (it == anc_.end() || it->second.size() != c.body.size())
      return Ancestry(c.body.size());
    return it->second;
  }

  std::vector<std::string> instantiate(const std::string& id, const std::string& var) {
    Ancestry a = ancestry(id);
    RuleInvocation inv = make(Rule::instantiate, id);
    inv.variable = var;
    auto out = apply(inv);
    for (const auto& n : out) anc_[n] = a;
    return out;
  }

  std::vector<std::string> unfold(const std::string& id, std::size_t pos, bool negative) {
    const Clause g = st_.clause(id);
    Ancestry a = ancestry(id);
    RuleInvocation inv = make(negative ? Rule::unfold_neg : Rule::unfold_pos, id);
    inv.positions = {pos};
    auto out = apply(inv);
    std::vector<Atom> chain = a[pos - 1];
    chain.push_back(g.body[pos - 1].atom);
    for (const auto& n : out) {
      const Clause& c = st_.clause(n);
      std::size_t inserted = c.body.size() + 1 - g.body.size();
      Ancestry na(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(pos - 1));
      for (std::size_t k = 0; k < inserted; ++k) na.push_back(chain);
      na.insert(na.end(), a.begin() + static_cast<std::ptrdiff_t>(pos), a.end());
      anc_[n] = na;
    }
    return out;
  }

  std::string fold(const std::string& id, const std::vector<std::string>& defs,
                   const std::vector<std::size_t>& positions, bool negative) {
    Ancestry a = ancestry(id);
    RuleInvocation inv = make(negative ? Rule::fold_neg : Rule::fold_pos, id);
    inv.using_ids = defs;
    inv.positions = positions;
    auto out = apply(inv);
    std::size_t first = *std::min_element(positions.begin(), positions.end());
    Ancestry na;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      if (i == first) na.emplace_back();
      if (std::find(positions.begin(), positions.end(), i) == positions.end())
        na.push_back(a[i - 1]);
    }
    anc_[out.at(0)] = na;
    return out.at(0);
  }

  std::string define(const std::string& text) {
    if (++introduced_ > opts_.max_definitions) throw Failure("definition budget exhausted");
    RuleInvocation inv = make(Rule::define, "");
    inv.definitions = {{"", text}};
    auto out = apply(inv);
    const std::string pred = st_.clause(out.at(0)).head.pred;
    def_preds_.insert(pred);
    queue(pred);
    return out.at(0);
  }

  void queue(const std::string& pred) {
    if (status_[pred] == 0 && std::find(pending_.begin(), pending_.end(), pred) == pending_.end())
      pending_.push_back(pred);
  }

  // ---- program queries --------------------------------------------------

  std::optional<std::size_t> ilist_pos(const std::string& pred) const {
    return st_.current.sig.ilist_position(pred);
  }

  bool consuming(const Literal& l) const {
    auto ip = ilist_pos(l.atom.pred);
    return ip && !l.atom.args[*ip].is_var();
  }

  std::vector<const Clause*> unifying(const Atom& a) const {
    std::vector<const Clause*> out;
    std::set<std::string> avoid = var_names(vars_of(a));
    for (const auto& c : st_.current.clauses) {
      if (c.head.pred != a.pred) continue;
      Clause r = rename_apart(c, avoid);
      if (mgu(a, r.head)) out.push_back(&c);
    }
    return out;
  }

  // Whether some clause would bind the (variable) ilist argument of a.
  bool binds_ilist(const Atom& a) const {
    auto ip = ilist_pos(a.pred);
    if (!ip || !a.args[*ip].is_var()) return false;
    std::set<std::string> avoid = var_names(vars_of(a));
    for (const auto& c : st_.current.clauses) {
      if (c.head.pred != a.pred) continue;
      Clause r = rename_apart(c, avoid);
      auto s = mgu(a, r.head);
      if (!s) continue;
      if (!apply_subst(a.args[*ip], *s).is_var()) return true;
    }
    return false;
  }

  bool recursive(const std::string& pred) const {
    std::set<std::string> seen;
    std::vector<std::string> todo{pred};
    while (!todo.empty()) {
      std::string cur = todo.back();
      todo.pop_back();
      for (const auto& c : st_.current.clauses)
        if (c.head.pred == cur)
          for (const auto& l : c.body) {
            if (l.atom.pred == pred) return true;
            if (seen.insert(l.atom.pred).second) todo.push_back(l.atom.pred);
          }
    }
    return false;
  }

  // The atom repeats or generalizes one of its unfolded ancestors, or an
  // ancestor embeds into it.
  static bool whistled(const Atom& b, const std::vector<Atom>& ancestors) {
    for (const auto& a : ancestors) {
      if (a.pred != b.pred) continue;
      Clause ra = rename_apart(Clause{"", a, {}}, var_names(vars_of(b)));
      if (match(b, ra.head)) return true;
      if (embeds(ra.head, b)) return true;
    }
    return false;
  }

  bool ground(const Atom& a) const {
    return std::all_of(a.args.begin(), a.args.end(), [](const Term& t) { return t.ground(); });
  }

  std::optional<std::string> subsuming_fact(const Clause& g) const {
    for (const auto& c : st_.current.clauses) {
      if (c.id == g.id || c.head.pred != g.head.pred || !c.body.empty()) continue;
      Clause r = rename_apart(c, var_names(vars_of(g)));
      if (match(r.head, g.head)) return c.id;
    }
    return std::nullopt;
  }

  void sweep_subsumed(const Clause& fact) {
    std::vector<std::string> victims;
    for (const auto& c : st_.current.clauses) {
      if (c.id == fact.id || c.head.pred != fact.head.pred) continue;
      Clause r = rename_apart(fact, var_names(vars_of(c)));
      if (match(r.head, c.head)) victims.push_back(c.id);
    }
    for (const auto& v : victims) {
      RuleInvocation inv = make(Rule::subsume, v);
      inv.using_ids = {fact.id};
      apply(inv);
    }
  }

  // ---- definitions --------------------------------------------------------

  // P0 predicates with a single, non-recursive clause whose head arguments
  // are distinct variables and which only occur inside other such clauses.
  void assume_candidate_definitions() {
    const Program& p = st_.current;
    std::set<std::string> cand;
    for (const auto& decl : p.sig.predicates) {
      auto cs = p.definition(decl.first);
      if (cs.size() != 1 || cs[0]->body.empty()) continue;
      std::set<std::string> names;
      bool ok = true;
      for (const auto& t : cs[0]->head.args)
        ok = ok && t.is_var() && names.insert(t.name()).second;
      if (ok && !recursive(decl.first)) cand.insert(decl.first);
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& c : p.clauses)
        if (!cand.count(c.head.pred))
          for (const auto& l : c.body)
            if (cand.erase(l.atom.pred)) changed = true;
    }
    std::vector<std::string> ids;
    for (const auto& c : p.clauses)
      if (cand.count(c.head.pred)) ids.push_back(c.id);
    if (ids.empty()) return;
    RuleInvocation inv = make(Rule::define, "");
    inv.assume = true;
    inv.using_ids = ids;
    try {
      apply(inv);
      def_preds_.insert(cand.begin(), cand.end());
    } catch (const RuleError&) {
      --steps_;
    }
  }

  bool single_clause_def(const std::string& def_id) const {
    const std::string& pred = st_.def_clauses.at(def_id).head.pred;
    std::size_t n = 0;
    for (const auto& [_, c] : st_.def_clauses) n += c.head.pred == pred;
    return n == 1;
  }

  // Positions of `lits` (1-based, in the definition body's order) when the
  // definition body is a variant of them.
  std::optional<std::vector<std::size_t>> variant_positions(const Clause& delta,
                                                            const Clause& g,
                                                            const std::vector<std::size_t>& lits) {
    if (delta.body.size() != lits.size()) return std::nullopt;
    Clause d = rename_apart(delta, var_names(vars_of(g)));
    std::vector<std::size_t> perm(lits);
    std::sort(perm.begin(), perm.end());
    do {
      bool same_preds = true;
      for (std::size_t k = 0; k < perm.size() && same_preds; ++k)
        same_preds = d.body[k].positive == g.body[perm[k] - 1].positive &&
                     d.body[k].atom.pred == g.body[perm[k] - 1].atom.pred;
      if (!same_preds) continue;
      std::vector<Literal> target;
      for (auto q : perm) target.push_back(g.body[q - 1]);
      auto theta = match(d.body, target);
      if (!theta) continue;
      std::set<std::string> images;
      bool renaming = true;
      for (const auto& [v, t] : *theta) renaming = renaming && t.is_var() && images.insert(t.name()).second;
      if (renaming) return perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
  }

  std::string fresh_pred() {
    std::set<std::string> used;
    for (const auto& d : st_.current.sig.predicates) used.insert(d.first);
    while (true) {
      std::string n = "new" + std::to_string(++name_counter_);
      if (!used.count(n)) return n;
    }
  }

  static std::string head_text(const std::string& name, const std::vector<Term>& vars) {
    if (vars.empty()) return name;
    std::string s = name + "(";
    for (std::size_t i = 0; i < vars.size(); ++i) s += (i ? ", " : "") + vars[i].name();
    return s + ")";
  }

  // Non-existential variables of the literals, finite ones first.
  std::vector<Term> head_vars(const Clause& g, const std::vector<Literal>& lits) const {
    auto ex = var_names(existential_vars(g));
    std::vector<Term> all = vars_of(lits), fin, inf;
    for (const auto& v : all) {
      if (ex.count(v.name())) continue;
      (v.type() == Type::ilist ? inf : fin).push_back(v);
    }
    fin.insert(fin.end(), inf.begin(), inf.end());
    return fin;
  }

  // Folds body positions `lits` of g positively, reusing a definition
  // whose body is a variant, or introducing one.
  std::string fold_component(const Clause& g, const std::vector<std::size_t>& lits) {
    for (const auto& def_id : st_.defs) {
      if (!single_clause_def(def_id)) continue;
      auto perm = variant_positions(st_.def_clauses.at(def_id), g, lits);
      if (!perm) continue;
      try {
        return fold(g.id, {def_id}, *perm, false);
      } catch (const RuleError&) {
        --steps_;
      }
    }
    std::vector<Literal> body;
    for (auto q : lits) body.push_back(g.body[q - 1]);
    std::string text = head_text(fresh_pred(), head_vars(g, body)) + " :- " + render_body(body);
    std::string def_id = define(text);
    return fold(g.id, {def_id}, lits, false);
  }

  // Folds the literal at pos (negative) with a wrapper definition
  // newK(vars, Y) :- q(..., Y, ...), whose list argument is generalized.
  std::string wrap_negative(const Clause& g, std::size_t pos) {
    const Atom& a = g.body[pos - 1].atom;
    auto ip = ilist_pos(a.pred);
    std::set<std::string> taken = var_names(vars_of(g));
    Atom body = a;
    std::vector<Term> hv;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!ip || i != *ip) collect_vars(a.args[i], hv);
    if (ip) {
      Term y = Term::var(fresh_name("Y", taken), Type::ilist);
      body.args[*ip] = y;
      hv.push_back(y);
    }
    std::vector<Term> uniq;
    std::set<std::string> seen;
    for (const auto& v : hv)
      if (seen.insert(v.name()).second) uniq.push_back(v);
    Clause probe{"", Atom{"probe", uniq}, {Literal{true, body}}};
    for (const auto& def_id : st_.defs) {
      const Clause& d = st_.def_clauses.at(def_id);
      if (d.body.size() != 1 || !d.body[0].positive || d.body[0].atom.pred != a.pred ||
          !single_clause_def(def_id) || !existential_vars(d).empty())
        continue;
      if (!variant(Clause{"", Atom{"probe", d.head.args}, d.body}, probe)) continue;
      try {
        return fold(g.id, {def_id}, {pos}, true);
      } catch (const RuleError&) {
        --steps_;
      }
    }
    std::string text = head_text(fresh_pred(), uniq) + " :- " + render(Literal{true, body});
    std::string def_id = define(text);
    return fold(g.id, {def_id}, {pos}, true);
  }

  // ---- the strategy -------------------------------------------------------

  void process(const std::string& pred) {
    if (status_[pred] != 0) return;
    status_[pred] = 1;
    current_finite_.push_back(!ilist_pos(pred).has_value());
    std::deque<std::string> work;
    std::vector<std::string> ids;
    for (const auto* c : st_.current.definition(pred)) ids.push_back(c->id);
    auto ip = ilist_pos(pred);
    for (const auto& id : ids) {
      const Clause& c = st_.clause(id);
      if (ip && c.head.args[*ip].is_var()) {
        for (const auto& n : instantiate(id, c.head.args[*ip].name())) work.push_back(n);
      } else {
        work.push_back(id);
      }
    }
    while (!work.empty()) {
      std::string id = work.front();
      work.pop_front();
      simplify(id, work);
    }
    current_finite_.pop_back();
    status_[pred] = 2;
  }

  void push_front(std::deque<std::string>& work, const std::vector<std::string>& ids) {
    for (auto it = ids.rbegin(); it != ids.rend(); ++it) work.push_front(*it);
  }

  // One simplification step on clause id; derived clauses go back to the
  // front of the work list. Returns when the clause needs no more steps.
  void simplify(const std::string& id, std::deque<std::string>& work) {
    while (exists(id)) {
      const Clause g = st_.clause(id);
      if (auto f = subsuming_fact(g)) {
        RuleInvocation inv = make(Rule::subsume, id);
        inv.using_ids = {*f};
        apply(inv);
        return;
      }
      if (g.body.empty()) {
        sweep_subsumed(g);
        return;
      }
      const Ancestry anc = ancestry(id);
      const auto ex = var_names(existential_vars(g));
      const bool finite_mode = current_finite_.back();

      // Consuming positive literals: unfold, after processing definitions.
      bool waited = false;
      for (std::size_t i = 0; i < g.body.size(); ++i) {
        const Literal& l = g.body[i];
        if (!l.positive || !consuming(l)) continue;
        if (def_preds_.count(l.atom.pred) && status_[l.atom.pred] == 0) {
          process(l.atom.pred);
          waited = true;
          break;
        }
        push_front(work, unfold(id, i + 1, false));
        return;
      }
      if (waited) continue;

      // Consuming negative literals.
      for (std::size_t i = 0; i < g.body.size(); ++i) {
        const Literal& l = g.body[i];
        if (l.positive || !consuming(l)) continue;
        const std::string& q = l.atom.pred;
        if (status_[q] != 2 && def_preds_.count(q)) {
          if (status_[q] == 1) throw Failure("negative dependency on " + q + " while it is processed");
          process(q);
          waited = true;
          break;
        }
        std::string cond;
        if (auto out = try_unfold_neg(id, i + 1, cond)) {
          push_front(work, *out);
          return;
        }
        if (!def_preds_.count(q)) {
          push_front(work, {wrap_negative(g, i + 1)});
          return;
        }
        if (cond == "R4(1)") {
          if (auto j = generator_for(g, i)) {
            push_front(work, unfold(id, *j + 1, false));
            return;
          }
        }
        throw Failure("cannot unfold " + render(l) + " in " + id + " (" + cond + ")");
      }
      if (waited) continue;

      // Finite atoms: deterministic ones first, then negative ground ones,
      // then the rest.
      std::optional<std::size_t> det, nondet;
      for (std::size_t i = 0; i < g.body.size(); ++i) {
        const Literal& l = g.body[i];
        if (!l.positive) continue;
        const Atom& a = l.atom;
        auto ip = ilist_pos(a.pred);
        bool nonvar = false;
        for (std::size_t k = 0; k < a.args.size(); ++k)
          if ((!ip || k != *ip) && !a.args[k].is_var()) nonvar = true;
        bool eligible = false;
        if (!ip) {
          auto vs = vars_of(a);
          bool isolated = !vs.empty();
          for (const auto& v : vs) {
            if (!ex.count(v.name())) isolated = false;
            for (std::size_t j = 0; j < g.body.size() && isolated; ++j)
              if (j != i && var_names(vars_of(g.body[j])).count(v.name())) isolated = false;
          }
          bool has_ex = std::any_of(vs.begin(), vs.end(),
                                    [&](const Term& v) { return ex.count(v.name()) > 0; });
          eligible = nonvar || isolated || (finite_mode && has_ex && !recursive(a.pred));
        } else {
          eligible = nonvar && !binds_ilist(a);
        }
        if (!eligible) continue;
        if (!ground(a) && whistled(a, anc[i])) continue;
        bool deterministic = unifying(a).size() <= 1;
        if (deterministic && !det) det = i;
        if (!deterministic && !nondet) nondet = i;
      }
      if (det) {
        push_front(work, unfold(id, *det + 1, false));
        return;
      }
      for (std::size_t i = 0; i < g.body.size(); ++i) {
        const Literal& l = g.body[i];
        if (l.positive || ilist_pos(l.atom.pred)) continue;
        auto vs = vars_of(l);
        if (std::any_of(vs.begin(), vs.end(), [&](const Term& v) { return ex.count(v.name()) > 0; }))
          continue;
        const std::string& q = l.atom.pred;
        if (status_[q] == 0) {
          process(q);
          waited = true;
          break;
        }
        std::string cond;
        if (auto out = try_unfold_neg(id, i + 1, cond)) {
          push_front(work, *out);
          return;
        }
      }
      if (waited) continue;
      if (nondet) {
        push_front(work, unfold(id, *nondet + 1, false));
        return;
      }

      // Negative non-consuming literals over non-definitions: wrap them so
      // the wrapper gets its own derivation.
      for (std::size_t i = 0; i < g.body.size(); ++i) {
        const Literal& l = g.body[i];
        if (l.positive || !ilist_pos(l.atom.pred) || def_preds_.count(l.atom.pred)) continue;
        auto vs = vars_of(l);
        if (std::any_of(vs.begin(), vs.end(), [&](const Term& v) { return ex.count(v.name()) > 0; }))
          continue;
        if (l.atom.args.size() == 1) {
          queue(l.atom.pred);
          continue;
        }
        push_front(work, {wrap_negative(g, i + 1)});
        return;
      }

      // Components of literals linked by existential variables.
      if (!ex.empty()) {
        std::vector<std::size_t> comp = first_component(g, ex);
        if (!comp.empty()) {
          push_front(work, {fold_component(g, comp)});
          return;
        }
      }

      // Positive non-consuming literals over non-definitions.
      for (std::size_t i = 0; i < g.body.size(); ++i) {
        const Literal& l = g.body[i];
        if (!ilist_pos(l.atom.pred)) continue;
        if (def_preds_.count(l.atom.pred)) {
          queue(l.atom.pred);
          continue;
        }
        if (l.atom.args.size() == 1) {
          queue(l.atom.pred);
          continue;
        }
        if (l.positive) {
          push_front(work, {fold_component(g, {i + 1})});
          return;
        }
      }
      return;
    }
  }

  std::optional<std::vector<std::string>> try_unfold_neg(const std::string& id, std::size_t pos,
                                                         std::string& cond) {
    try {
      return unfold(id, pos, true);
    } catch (const RuleError& e) {
      --steps_;
      cond = e.condition;
      return std::nullopt;
    }
  }

  // A positive finite literal binding an existential variable of the
  // negative literal at index i.
  std::optional<std::size_t> generator_for(const Clause& g, std::size_t i) const {
    auto ex = var_names(existential_vars(g));
    auto vs = var_names(vars_of(g.body[i]));
    for (std::size_t j = 0; j < g.body.size(); ++j) {
      if (j == i || !g.body[j].positive || ilist_pos(g.body[j].atom.pred)) continue;
      for (const auto& v : vars_of(g.body[j]))
        if (ex.count(v.name()) && vs.count(v.name())) return j;
    }
    return std::nullopt;
  }

  // 1-based positions of the first group of literals connected through
  // existential variables (a group with at least one such variable).
  std::vector<std::size_t> first_component(const Clause& g, const std::set<std::string>& ex) const {
    const std::size_t n = g.body.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::map<std::string, std::size_t> owner;
    std::vector<bool> has_ex(n, false);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& v : vars_of(g.body[i])) {
        if (!ex.count(v.name())) continue;
        has_ex[i] = true;
        auto [it, fresh] = owner.emplace(v.name(), i);
        if (!fresh) parent[find(i)] = find(it->second);
      }
    for (std::size_t i = 0; i < n; ++i) {
      if (!has_ex[i]) continue;
      std::vector<std::size_t> out;
      for (std::size_t j = 0; j < n; ++j)
        if (has_ex[j] && find(j) == find(i)) out.push_back(j + 1);
      bool any_positive = false;
      for (auto p : out) any_positive = any_positive || g.body[p - 1].positive;
      if (!any_positive)
        throw Failure("clause " + g.id + " has a negative literal with an unbound variable");
      return out;
    }
    return {};
  }

  std::string query_;
  StrategyOptions opts_;
  std::size_t steps_ = 0;
  int name_counter_ = 0;
  std::map<std::string, Ancestry> anc_;
  std::map<std::string, int> status_;  // 0 untouched, 1 in progress, 2 done
  std::set<std::string> def_preds_;
  std::deque<std::string> pending_;
  std::vector<bool> current_finite_;
};

// Raises levels so that every definition used for positive folding is
// sigma-tight: the highest positive body atom is lifted to the stratum of
// the body.
bool raise_levels(const TransformState& st, const AdmissibilityReport& rep, LevelMapping& pins) {
  bool changed = false;
  for (const auto& f : rep.findings) {
    if (f.condition != "2.1" || f.pass) continue;
    const Step& s = st.steps.at(static_cast<std::size_t>(f.step - 1));
    const Clause& delta = st.def_clauses.at(s.definitions.front());
    int target = 0;
    for (const auto& l : delta.body)
      target = std::max(target, st.levels.of(l.atom.pred) + (l.positive ? 0 : 1));
    const Literal* best = nullptr;
    for (const auto& l : delta.body)
      if (l.positive && (!best || st.levels.of(l.atom.pred) > st.levels.of(best->atom.pred)))
        best = &l;
    if (!best) continue;
    const std::string& p = best->atom.pred;
    if (!st.p0_preds.count(p)) continue;
    int cur = pins.has(p) ? pins.of(p) : st.levels.of(p);
    if (target > cur) {
      pins.level[p] = target;
      changed = true;
    }
  }
  return changed;
}

}  // namespace

StrategyResult auto_derive_monadic(const Program& p, const std::string& query,
                                   const StrategyOptions& opts) {
  StrategyResult res;
  if (!p.sig.pred_types(query)) {
    res.failure = "unknown query predicate " + query;
    return res;
  }
  {
    Program slice = reachable_slice(p, query);
    auto m = classify_monadic(slice);
    if (auto* mp = std::get_if<MonadicProgram>(&m)) {
      res.success = true;
      res.state = initial_state(p);
      res.slice = slice;
      res.monadic = *mp;
      return res;
    }
  }
  LevelMapping pins;
  for (int round = 0; round <= opts.level_rounds; ++round) {
    Deriver d(p, query, pins, opts);
    try {
      d.run();
    } catch (const Failure& e) {
      res.failure = e.what();
      res.script = d.script_;
      res.state = d.st_;
      res.definitions = d.introduced_;
      return res;
    } catch (const Error& e) {
      res.failure = std::string("rule failure: ") + e.what();
      res.script = d.script_;
      res.state = d.st_;
      res.definitions = d.introduced_;
      return res;
    }
    res.script = d.script_;
    res.state = d.st_;
    res.definitions = d.introduced_;
    res.slice = reachable_slice(d.st_.current, query);
    auto rep = check_admissibility(d.st_);
    if (!rep.admissible) {
      if (round < opts.level_rounds && raise_levels(d.st_, rep, pins)) continue;
      res.failure = "derivation is not admissible";
      return res;
    }
    auto m = classify_monadic(res.slice);
    if (auto* r = std::get_if<MonadicRejection>(&m)) {
      res.failure = "result is not monadic: " + (r->clause.empty() ? "" : r->clause + ": ") + r->reason;
      return res;
    }
    res.monadic = std::get<MonadicProgram>(m);
    res.success = true;
    return res;
  }
  res.failure = "level adjustment did not converge";
  return res;
}

}  // namespace omegafold
