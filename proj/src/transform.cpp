#include "omegafold/transform.hpp"

#include <algorithm>

#include "omegafold/parser.hpp"
#include "omegafold/unify.hpp"

namespace omegafold {

std::string to_string(Rule r) {
  switch (r) {
    case Rule::initial: return "initial";
    case Rule::define: return "define";
    case Rule::instantiate: return "instantiate";
    case Rule::unfold_pos: return "unfold+";
    case Rule::unfold_neg: return "unfold-";
    case Rule::subsume: return "subsume";
    case Rule::fold_pos: return "fold+";
    case Rule::fold_neg: return "fold-";
  }
  return "?";
}

Program TransformState::p0_with_defs() const {
  Program out{current.sig, p0.clauses};
  for (const auto& id : defs) out.clauses.push_back(def_clauses.at(id));
  return out;
}

bool TransformState::is_descendant(const std::string& eta, const std::string& gamma) const {
  std::string cur = eta;
  while (true) {
    if (cur == gamma) return true;
    auto it = dag.find(cur);
    if (it == dag.end() || it->second.parent.empty()) return false;
    cur = it->second.parent;
  }
}

const Clause& TransformState::clause(const std::string& id) const {
  if (const Clause* c = current.find(id)) return *c;
  throw RuleError("ref", "no clause " + id + " in the current program");
}

namespace {

std::string positions_text(const std::vector<std::size_t>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "," : "") + std::to_string(ps[i]);
  return s;
}

std::string ids_text(const std::vector<std::string>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + ids[i];
  return s;
}

std::string subst_text(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s) {
    out += (first ? "" : ", ") + v + "/" + render(t);
    first = false;
  }
  return out + "}";
}

std::string take_id(TransformState& st, const std::string& requested) {
  if (!requested.empty()) {
    if (!st.used_ids.insert(requested).second)
      throw RuleError("ref", "clause id " + requested + " is already in use");
    return requested;
  }
  while (st.used_ids.count("c" + std::to_string(st.next_id))) ++st.next_id;
  std::string id = "c" + std::to_string(st.next_id++);
  st.used_ids.insert(id);
  return id;
}

std::size_t index_of(const Program& p, const std::string& id) {
  for (std::size_t i = 0; i < p.clauses.size(); ++i)
    if (p.clauses[i].id == id) return i;
  throw RuleError("ref", "no clause " + id + " in the current program");
}

TransformState begin_step(const TransformState& st, Rule r, std::string text, std::string target) {
  TransformState next = st;
  Step s;
  s.index = static_cast<int>(st.steps.size()) + 1;
  s.rule = r;
  s.text = std::move(text);
  s.target = std::move(target);
  next.steps.push_back(std::move(s));
  return next;
}

// Replaces clause `id` in place by `derived`, recording each with `proto`.
void replace_clause(TransformState& st, const std::string& id, std::vector<Clause> derived,
                    const std::vector<ClauseRecord>& records) {
  std::size_t at = index_of(st.current, id);
  Step& step = st.steps.back();
  step.removed.push_back(st.current.clauses[at]);
  st.current.clauses.erase(st.current.clauses.begin() + static_cast<std::ptrdiff_t>(at));
  for (std::size_t i = 0; i < derived.size(); ++i) {
    Clause c = tidy_variables(derived[i]);
    c.id = take_id(st, "");
    ClauseRecord rec = records[i];
    rec.step = step.index;
    st.dag[c.id] = rec;
    for (const auto& l : c.body) st.seen_preds.insert(l.atom.pred);
    step.added.push_back(c);
    st.current.clauses.insert(st.current.clauses.begin() + static_cast<std::ptrdiff_t>(at + i), c);
  }
}

const Literal& literal_at(const Clause& c, std::size_t pos) {
  if (pos == 0 || pos > c.body.size())
    throw RuleError("position", "clause " + c.id + " has no body position " + std::to_string(pos));
  return c.body[pos - 1];
}

// Variables of `gamma`, which renamed clauses must avoid.
std::set<std::string> avoid_set(const Clause& gamma) { return var_names(vars_of(gamma)); }

void check_definition_shape(const std::vector<Clause>& clauses,
                            const std::set<std::string>& allowed_body_preds,
                            const std::string& rule) {
  const Atom& head = clauses.front().head;
  std::set<std::string> seen;
  for (const auto& t : head.args) {
    if (!t.is_var())
      throw RuleError(rule + "(ii)", "head argument " + render(t) + " of " + render(head) +
                                          " is not a variable");
    if (!seen.insert(t.name()).second)
      throw RuleError(rule + "(ii)", "head variable " + t.name() + " repeated");
  }
  std::set<std::string> body_vars;
  for (const auto& c : clauses) {
    if (!(c.head == head))
      throw RuleError(rule + "(ii)", "clauses of one definition must share the head " +
                                          render(head));
    if (c.body.empty())
      throw RuleError(rule + "(iii)", "definition clause " + render(c) + " has an empty body");
    for (const auto& v : vars_of(c.body)) body_vars.insert(v.name());
    for (const auto& l : c.body)
      if (!allowed_body_preds.count(l.atom.pred))
        throw RuleError(rule + "(iv)", "body predicate " + l.atom.pred +
                                           " is neither in P0 nor defined by an earlier definition");
  }
  for (const auto& v : seen)
    if (!body_vars.count(v))
      throw RuleError(rule + "(ii)", "head variable " + v + " does not occur in the body");
}

std::set<std::string> definable_body_preds(const TransformState& st) {
  std::set<std::string> out = st.p0_preds;
  for (const auto& [id, c] : st.def_clauses) out.insert(c.head.pred);
  return out;
}

}  // namespace

TransformState initial_state(const Program& p0, const LevelMapping& pinned) {
  TransformState st;
  st.p0 = p0;
  st.current = p0;
  st.pinned = pinned;
  auto lm = infer_level_mapping(p0, pinned);
  if (auto* u = std::get_if<Unstratifiable>(&lm)) throw RuleError("stratified", u->message);
  st.levels = std::get<LevelMapping>(lm);
  for (const auto& c : p0.clauses) {
    st.used_ids.insert(c.id);
    st.dag[c.id] = ClauseRecord{};
  }
  st.p0_preds = p0.predicates_used();
  st.seen_preds = st.p0_preds;
  st.next_id = static_cast<int>(p0.clauses.size()) + 1;
  return st;
}

TransformState assume_definitions(const TransformState& st, const std::vector<std::string>& ids) {
  for (const auto& s : st.steps)
    if (s.rule != Rule::define)
      throw RuleError("R1(i)", "defs must precede every other rule application");
  TransformState next = begin_step(st, Rule::define, "defs " + ids_text(ids), "");
  std::map<std::string, std::vector<Clause>> groups;
  std::vector<std::string> order;
  for (const auto& id : ids) {
    const Clause* c = next.p0.find(id);
    if (c == nullptr) throw RuleError("ref", "no clause " + id + " in P0");
    if (!groups.count(c->head.pred)) order.push_back(c->head.pred);
    groups[c->head.pred].push_back(*c);
  }
  Program rest{next.p0.sig, {}};
  for (const auto& c : next.p0.clauses)
    if (std::find(ids.begin(), ids.end(), c.id) == ids.end()) rest.clauses.push_back(c);
  for (const auto& [pred, cs] : groups) {
    if (st.current.definition(pred).size() != cs.size())
      throw RuleError("R1", "defs must list every clause of " + pred);
    for (const auto& c : rest.clauses) {
      bool occurs = c.head.pred == pred;
      for (const auto& l : c.body) occurs = occurs || l.atom.pred == pred;
      if (occurs)
        throw RuleError("R1(i)", pred + " occurs in clause " + c.id + " of the remaining program");
    }
  }
  // Introduce the definitions in dependency order; each may use P0 and
  // earlier ones only, so cycles are rejected.
  next.p0 = rest;
  next.p0_preds = rest.predicates_used();
  std::set<std::string> pending(order.begin(), order.end());
  while (!pending.empty()) {
    bool progress = false;
    for (const auto& pred : order) {
      if (!pending.count(pred)) continue;
      auto allowed = definable_body_preds(next);
      bool ready = true;
      for (const auto& c : groups[pred])
        for (const auto& l : c.body)
          if (pending.count(l.atom.pred)) ready = false;
      if (!ready) continue;
      check_definition_shape(groups[pred], allowed, "R1");
      for (const auto& c : groups[pred]) {
        next.defs.push_back(c.id);
        next.def_clauses[c.id] = c;
        next.dag[c.id] = ClauseRecord{Rule::define, "", {}, {}, "", false, next.steps.back().index};
      }
      pending.erase(pred);
      progress = true;
    }
    if (!progress) throw RuleError("R1(iv)", "defs are mutually recursive");
  }
  return next;
}

TransformState define(const TransformState& st,
                      const std::vector<std::pair<std::string, std::string>>& clauses) {
  if (clauses.empty()) throw RuleError("R1", "empty definition");
  std::vector<Clause> parsed;
  Signature sig = st.current.sig;
  for (const auto& [id, text] : clauses) {
    ParsedClause pc = parse_clause(sig, text, id, true);
    if (pc.new_predicate) {
      sig.add_predicate(pc.new_predicate->first, pc.new_predicate->second);
    }
    parsed.push_back(pc.clause);
  }
  const std::string newp = parsed.front().head.pred;
  for (const auto& c : parsed)
    if (c.head.pred != newp)
      throw RuleError("R1", "all clauses of a definition must define the same predicate");
  if (st.seen_preds.count(newp))
    throw RuleError("R1(i)", "predicate " + newp + " already occurs in the program sequence");
  check_definition_shape(parsed, definable_body_preds(st), "R1");

  TransformState next = begin_step(st, Rule::define, "define " + newp, "");
  next.current.sig = sig;
  if (auto it = st.pinned.level.find(newp); it != st.pinned.level.end()) {
    next.levels.level[newp] = it->second;
    if (auto m = st.pinned.measured.find(newp); m != st.pinned.measured.end())
      next.levels.measured[newp] = m->second;
  } else {
    next.levels.level[newp] = minimal_head_level(parsed, st.levels);
  }
  for (auto& c : parsed) {
    auto v = check_stratified(c, next.levels);
    if (!v.empty()) throw RuleError("1", "definition " + render(c) + ": " + v.front().message);
    c.id = take_id(next, c.id);
    next.defs.push_back(c.id);
    next.def_clauses[c.id] = c;
    next.dag[c.id] = ClauseRecord{Rule::define, "", {}, {}, "", false, next.steps.back().index};
    next.current.clauses.push_back(c);
    next.steps.back().added.push_back(c);
  }
  next.seen_preds.insert(newp);
  std::vector<std::string> ids;
  for (const auto& c : parsed) ids.push_back(c.id);
  next.steps.back().text = "define " + ids_text(ids);
  return next;
}

TransformState instantiate(const TransformState& st, const std::string& id, const std::string& var) {
  const Clause& gamma = st.clause(id);
  std::optional<Term> x;
  for (const auto& v : vars_of(gamma))
    if (v.name() == var) x = v;
  if (!x) throw RuleError("R2", "variable " + var + " does not occur in " + id);
  if (x->type() != Type::ilist) throw RuleError("R2", "variable " + var + " is not of type ilist");
  if (st.current.sig.alphabet.empty()) throw RuleError("R2", "empty alphabet");
  TransformState next = begin_step(st, Rule::instantiate, "instantiate " + id + " " + var, id);
  std::vector<Clause> out;
  std::vector<ClauseRecord> recs;
  for (const auto& s : st.current.sig.alphabet) {
    Substitution sub{{var, Term::cons(Term::elem(s), *x)}};
    out.push_back(apply_subst(gamma, sub));
    recs.push_back(ClauseRecord{Rule::instantiate, id, {}, {}, subst_text(sub), false, 0});
  }
  replace_clause(next, id, std::move(out), recs);
  return next;
}

TransformState unfold_pos(const TransformState& st, const std::string& id, std::size_t pos) {
  const Clause& gamma = st.clause(id);
  const Literal& lit = literal_at(gamma, pos);
  if (!lit.positive) throw RuleError("R3", "body position " + std::to_string(pos) + " is negative");
  const bool certified =
      sigma_maximal_atoms(gamma, st.levels).count(pos) > 0 && st.p0_preds.count(lit.atom.pred) > 0;
  TransformState next =
      begin_step(st, Rule::unfold_pos, "unfold+ " + id + " at " + std::to_string(pos), id);
  const auto avoid = avoid_set(gamma);
  std::vector<Clause> out;
  std::vector<ClauseRecord> recs;
  for (const auto& k : st.current.clauses) {
    if (k.head.pred != lit.atom.pred) continue;
    Clause r = rename_apart(k, avoid);
    auto theta = mgu(lit.atom, r.head);
    if (!theta) continue;
    Clause eta{"", gamma.head, {}};
    for (std::size_t i = 0; i < gamma.body.size(); ++i) {
      if (i + 1 == pos) eta.body.insert(eta.body.end(), r.body.begin(), r.body.end());
      else eta.body.push_back(gamma.body[i]);
    }
    out.push_back(apply_subst(eta, *theta));
    recs.push_back(ClauseRecord{Rule::unfold_pos, id, {k.id}, {pos}, subst_text(*theta), certified, 0});
  }
  replace_clause(next, id, std::move(out), recs);
  return next;
}

std::vector<std::vector<Literal>> negate_to_dnf(const std::vector<std::vector<Literal>>& bodies) {
  std::vector<std::vector<Literal>> acc{{}};
  for (const auto& b : bodies) {
    std::vector<std::vector<Literal>> grown;
    for (const auto& partial : acc) {
      for (const auto& l : b) {
        Literal neg = l.complement();
        if (std::find(partial.begin(), partial.end(), l) != partial.end()) continue;
        std::vector<Literal> d = partial;
        if (std::find(d.begin(), d.end(), neg) == d.end()) d.push_back(neg);
        grown.push_back(std::move(d));
      }
    }
    acc = std::move(grown);
    if (acc.empty()) break;
  }
  return acc;
}

TransformState unfold_neg(const TransformState& st, const std::string& id, std::size_t pos) {
  const Clause& gamma = st.clause(id);
  const Literal& lit = literal_at(gamma, pos);
  if (lit.positive) throw RuleError("R4", "body position " + std::to_string(pos) + " is positive");
  const auto avoid = avoid_set(gamma);
  std::vector<std::vector<Literal>> bodies;
  std::vector<std::string> used;
  for (const auto& k : st.current.clauses) {
    if (k.head.pred != lit.atom.pred) continue;
    Clause r = rename_apart(k, avoid);
    if (!mgu(lit.atom, r.head)) continue;
    auto theta = match(r.head, lit.atom);
    if (!theta)
      throw RuleError("R4(1)", render(lit.atom) + " is not an instance of the head of " + k.id);
    if (!existential_vars(k).empty())
      throw RuleError("R4(2)", "clause " + k.id + " has existential variables");
    bodies.push_back(apply_subst(r.body, *theta));
    used.push_back(k.id);
  }
  TransformState next =
      begin_step(st, Rule::unfold_neg, "unfold- " + id + " at " + std::to_string(pos), id);
  std::vector<Clause> out;
  std::vector<ClauseRecord> recs;
  for (const auto& d : negate_to_dnf(bodies)) {
    Clause eta{"", gamma.head, {}};
    for (std::size_t i = 0; i < gamma.body.size(); ++i) {
      if (i + 1 == pos) eta.body.insert(eta.body.end(), d.begin(), d.end());
      else eta.body.push_back(gamma.body[i]);
    }
    out.push_back(eta);
    recs.push_back(ClauseRecord{Rule::unfold_neg, id, used, {pos}, "", false, 0});
  }
  replace_clause(next, id, std::move(out), recs);
  return next;
}

TransformState subsume(const TransformState& st, const std::string& removed,
                       const std::string& by) {
  if (removed == by) throw RuleError("R5", "a clause cannot subsume itself");
  const Clause& g2 = st.clause(removed);
  const Clause& g1 = st.clause(by);
  if (!g1.body.empty()) throw RuleError("R5", "subsuming clause " + by + " is not a fact");
  Clause r = rename_apart(g1, avoid_set(g2));
  if (!match(r.head, g2.head))
    throw RuleError("R5", "head of " + removed + " is not an instance of " + render(g1.head));
  TransformState next =
      begin_step(st, Rule::subsume, "subsume " + removed + " by " + by, removed);
  std::size_t at = index_of(next.current, removed);
  next.steps.back().removed.push_back(next.current.clauses[at]);
  next.current.clauses.erase(next.current.clauses.begin() + static_cast<std::ptrdiff_t>(at));
  return next;
}

namespace {

std::vector<std::size_t> checked_positions(const Clause& gamma, std::vector<std::size_t> ps,
                                           const std::string& rule) {
  std::set<std::size_t> seen;
  for (auto p : ps) {
    if (p == 0 || p > gamma.body.size())
      throw RuleError(rule, "clause " + gamma.id + " has no body position " + std::to_string(p));
    if (!seen.insert(p).second) throw RuleError(rule, "position " + std::to_string(p) + " repeated");
  }
  return ps;
}

Clause folded_clause(const Clause& gamma, const std::vector<std::size_t>& ps, const Literal& folded) {
  const std::size_t first = *std::min_element(ps.begin(), ps.end());
  Clause eta{"", gamma.head, {}};
  for (std::size_t i = 1; i <= gamma.body.size(); ++i) {
    if (i == first) eta.body.push_back(folded);
    if (std::find(ps.begin(), ps.end(), i) == ps.end()) eta.body.push_back(gamma.body[i - 1]);
  }
  return eta;
}

// One renaming applied to several clauses, away from `avoid`.
std::vector<Clause> rename_together(const std::vector<Clause>& cs, const std::set<std::string>& avoid) {
  std::set<std::string> taken = avoid;
  Substitution s;
  for (const auto& c : cs)
    for (const auto& v : vars_of(c)) {
      if (s.count(v.name())) continue;
      std::string n = fresh_name(v.name(), taken);
      taken.insert(n);
      s.emplace(v.name(), Term::var(n, v.type()));
    }
  std::vector<Clause> out;
  for (const auto& c : cs) out.push_back(apply_subst(c, s));
  return out;
}

}  // namespace

TransformState fold_pos(const TransformState& st, const std::string& id, const std::string& def,
                        std::vector<std::size_t> positions) {
  const Clause& gamma = st.clause(id);
  auto dit = st.def_clauses.find(def);
  if (dit == st.def_clauses.end()) throw RuleError("R6", def + " is not a definition clause");
  const Clause& delta = dit->second;
  std::size_t same = 0;
  for (const auto& [_, c] : st.def_clauses) same += c.head.pred == delta.head.pred;
  if (same != 1)
    throw RuleError("R6", "definition of " + delta.head.pred + " has more than one clause");
  if (delta.body.empty()) throw RuleError("R6", "definition " + def + " has an empty body");
  positions = checked_positions(gamma, positions, "R6");
  if (positions.size() != delta.body.size())
    throw RuleError("R6", "expected " + std::to_string(delta.body.size()) + " positions");

  Clause d = rename_apart(delta, avoid_set(gamma));
  std::vector<Literal> target;
  for (auto p : positions) target.push_back(gamma.body[p - 1]);
  auto theta = match(d.body, target);
  if (!theta) throw RuleError("R6", "body of " + def + " does not match the selected literals");

  std::vector<Literal> rest;
  for (std::size_t i = 1; i <= gamma.body.size(); ++i)
    if (std::find(positions.begin(), positions.end(), i) == positions.end())
      rest.push_back(gamma.body[i - 1]);
  std::vector<Term> outside;
  for (const auto& t : gamma.head.args) collect_vars(t, outside);
  for (const auto& t : vars_of(rest)) collect_vars(t, outside);
  const auto outside_names = var_names(outside);
  const auto head_vars = var_names(vars_of(d.head));
  const auto body_vars = vars_of(d.body);
  for (const auto& x : body_vars) {
    if (head_vars.count(x.name())) continue;
    const Term& img = theta->at(x.name());
    if (!img.is_var())
      throw RuleError("R6(i)", "existential variable " + x.name() + " is bound to " + render(img));
    if (outside_names.count(img.name()))
      throw RuleError("R6(i)", "variable " + img.name() + " (image of " + x.name() +
                                    ") occurs outside the folded literals");
    for (const auto& y : body_vars)
      if (y.name() != x.name() && occurs(img.name(), theta->at(y.name())))
        throw RuleError("R6(ii)", "variable " + img.name() + " (image of " + x.name() +
                                       ") occurs in the image of " + y.name());
  }
  TransformState next = begin_step(
      st, Rule::fold_pos, "fold+ " + id + " using " + def + " at " + positions_text(positions), id);
  next.steps.back().definitions = {def};
  Clause eta = folded_clause(gamma, positions, Literal{true, apply_subst(d.head, *theta)});
  replace_clause(next, id, {eta},
                 {ClauseRecord{Rule::fold_pos, id, {def}, positions, subst_text(*theta), false, 0}});
  return next;
}

TransformState fold_neg(const TransformState& st, const std::string& id,
                        const std::vector<std::string>& defs, std::vector<std::size_t> positions) {
  const Clause& gamma = st.clause(id);
  if (defs.empty()) throw RuleError("R7", "no definition clauses given");
  std::vector<Clause> ds;
  for (const auto& d : defs) {
    auto it = st.def_clauses.find(d);
    if (it == st.def_clauses.end()) throw RuleError("R7", d + " is not a definition clause");
    ds.push_back(it->second);
  }
  const std::string pred = ds.front().head.pred;
  std::size_t total = 0;
  for (const auto& [_, c] : st.def_clauses) total += c.head.pred == pred;
  std::set<std::string> distinct(defs.begin(), defs.end());
  for (const auto& d : ds)
    if (d.head.pred != pred) throw RuleError("R7", "definitions belong to different predicates");
  if (distinct.size() != defs.size() || total != defs.size())
    throw RuleError("R7", "the given clauses are not the whole definition of " + pred);
  for (const auto& d : ds) {
    if (d.body.size() != 1) throw RuleError("R7", "definition " + d.id + " is not a single literal");
    if (!existential_vars(d).empty())
      throw RuleError("R7", "definition " + d.id + " has existential variables");
  }
  positions = checked_positions(gamma, positions, "R7");
  if (positions.size() != ds.size())
    throw RuleError("R7", "expected " + std::to_string(ds.size()) + " positions");

  auto renamed = rename_together(ds, avoid_set(gamma));
  std::vector<Literal> pattern, target;
  for (std::size_t i = 0; i < renamed.size(); ++i) {
    pattern.push_back(renamed[i].body[0].complement());
    target.push_back(gamma.body[positions[i] - 1]);
  }
  auto theta = match(pattern, target);
  if (!theta)
    throw RuleError("R7", "selected literals are not the complements of the definition bodies");
  Clause eta = folded_clause(gamma, positions, Literal{false, apply_subst(renamed[0].head, *theta)});
  auto v = check_stratified(eta, st.levels);
  if (!v.empty()) throw RuleError("3", "folded clause " + render(eta) + ": " + v.front().message);
  TransformState next = begin_step(st, Rule::fold_neg,
                                   "fold- " + id + " using " + ids_text(defs) + " at " +
                                       positions_text(positions),
                                   id);
  next.steps.back().definitions = defs;
  replace_clause(next, id, {eta},
                 {ClauseRecord{Rule::fold_neg, id, defs, positions, subst_text(*theta), false, 0}});
  return next;
}

// ---- admissibility ----

std::vector<NuFinding> lint_condition_nu(const TransformState& st) {
  std::vector<NuFinding> out;
  auto positives = [](const Clause& c) {
    return static_cast<std::size_t>(
        std::count_if(c.body.begin(), c.body.end(), [](const Literal& l) { return l.positive; }));
  };
  for (const auto& s : st.steps) {
    if (s.rule != Rule::unfold_neg || s.removed.empty()) continue;
    const Clause& parent = s.removed.front();
    for (const auto& d : s.added)
      if (positives(d) > positives(parent))
        out.push_back({s.index, parent.id, d.id, positives(parent), positives(d)});
  }
  return out;
}

AdmissibilityReport check_admissibility(const TransformState& st) {
  AdmissibilityReport rep;
  auto add = [&](Finding f) {
    if (!f.pass) rep.admissible = false;
    rep.findings.push_back(std::move(f));
  };
  for (const auto& s : st.steps) {
    if (s.rule == Rule::define) {
      for (const auto& c : s.added.empty() ? std::vector<Clause>{} : s.added) {
        auto v = check_stratified(c, st.levels);
        add({s.index, "define", c.id, "1", v.empty(), v.empty() ? "" : v.front().message});
      }
      if (s.added.empty())  // defs directive
        for (const auto& id : st.defs)
          if (st.dag.at(id).step == s.index) {
            auto v = check_stratified(st.def_clauses.at(id), st.levels);
            add({s.index, "define", id, "1", v.empty(), v.empty() ? "" : v.front().message});
          }
    } else if (s.rule == Rule::fold_pos) {
      const std::string& gamma = s.target;
      const Clause& delta = st.def_clauses.at(s.definitions.front());
      const Clause& folded = s.removed.front();
      bool tight = is_sigma_tight(delta, st.levels);
      bool in_p0 = st.p0_preds.count(folded.head.pred) > 0;
      bool descends = false;
      std::string witness;
      for (std::string cur = gamma; !cur.empty();) {
        const auto& rec = st.dag.at(cur);
        if (rec.rule == Rule::unfold_pos && rec.certified_unfold && rec.step >= 1) {
          descends = true;
          witness = cur;
          break;
        }
        cur = rec.parent;
      }
      add({s.index, "fold+", gamma, "2.1", tight,
           tight ? delta.id + " is sigma-tight"
                 : delta.id + " is not sigma-tight under the level mapping"});
      add({s.index, "fold+", gamma, "2.2.i", in_p0,
           "head predicate " + folded.head.pred + (in_p0 ? " occurs" : " does not occur") +
               " in P0"});
      add({s.index, "fold+", gamma, "2.2.ii", descends,
           descends ? "descendant of " + witness + ", derived by unfolding a sigma-maximal P0 atom"
                    : "not a descendant of a clause derived by unfolding a sigma-maximal P0 atom"});
      bool cond2 = tight && (in_p0 || descends);
      Finding f{s.index, "fold+", gamma, "2", cond2, cond2 ? "" : "condition (2) violated"};
      add(f);
    } else if (s.rule == Rule::fold_neg) {
      const Clause& eta = s.added.front();
      auto v = check_stratified(eta, st.levels);
      add({s.index, "fold-", s.target, "3", v.empty(), v.empty() ? "" : v.front().message});
    }
  }
  // sub-conditions are reported as evaluated; only (1), (2), (3) decide
  rep.admissible = true;
  for (const auto& f : rep.findings)
    if ((f.condition == "1" || f.condition == "2" || f.condition == "3") && !f.pass)
      rep.admissible = false;
  rep.nu = lint_condition_nu(st);
  return rep;
}

std::string AdmissibilityReport::to_string() const {
  std::string out = std::string("verdict: ") + (admissible ? "admissible" : "rejected") + "\n";
  for (const auto& f : findings) {
    out += "condition: step=" + std::to_string(f.step) + " rule=" + f.rule + " clause=" + f.clause +
           " cond=" + f.condition + " result=" + (f.pass ? "pass" : "fail");
    if (!f.detail.empty()) out += " detail=\"" + f.detail + "\"";
    out += "\n";
  }
  for (const auto& n : nu)
    out += "nu: step=" + std::to_string(n.step) + " parent=" + n.parent + " derived=" + n.derived +
           " positive=" + std::to_string(n.parent_positive) + "->" +
           std::to_string(n.derived_positive) + "\n";
  return out;
}

}  // namespace omegafold
