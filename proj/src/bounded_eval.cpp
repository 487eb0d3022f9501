#include <map>
#include <memory>

#include "omegafold/oracle.hpp"
#include "omegafold/unify.hpp"

namespace omegafold {

std::string ThreeValued::to_string() const {
  switch (value) {
    case Value::true_: return "true";
    case Value::false_: return "false";
    case Value::unknown: return "unknown(depth " + std::to_string(bound) + ")";
  }
  return "?";
}

std::set<std::string> propositional_perfect_model(
    const Program& p, const LevelMapping& lm,
    const std::function<bool(const Literal&)>& external) {
  std::map<int, std::vector<const Clause*>> by_level;
  for (const auto& c : p.clauses) {
    if (!c.head.args.empty())
      throw Error("clause " + c.id + " is not propositional");
    by_level[lm.of(c.head.pred)].push_back(&c);
  }
  std::set<std::string> model;
  for (const auto& [lvl, clauses] : by_level) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto* c : clauses) {
        if (model.count(c->head.pred)) continue;
        bool fires = true;
        for (const auto& l : c->body) {
          bool holds;
          if (!l.atom.args.empty()) {
            if (!external) throw Error("clause " + c->id + " has a non-propositional body literal");
            holds = external(l);
          } else {
            holds = model.count(l.atom.pred) > 0;
            if (!l.positive) holds = !holds;
          }
          if (!holds) {
            fires = false;
            break;
          }
        }
        if (fires) {
          model.insert(c->head.pred);
          changed = true;
        }
      }
    }
  }
  return model;
}

namespace {

struct Ancestors {
  Atom atom;
  std::shared_ptr<const Ancestors> up;
};

bool on_path(const Atom& a, const std::shared_ptr<const Ancestors>& anc) {
  for (const Ancestors* x = anc.get(); x; x = x->up.get())
    if (x->atom == a) return true;
  return false;
}

struct Goal {
  Literal lit;
  int budget;
  std::shared_ptr<const Ancestors> anc;
};

bool atom_ground(const Atom& a) {
  for (const auto& t : a.args)
    if (!t.ground()) return false;
  return true;
}

class BoundedProver {
 public:
  explicit BoundedProver(const Program& p) {
    for (const auto& c : p.clauses) defs_[c.head.pred].push_back(&c);
  }

  ThreeValued prove(const Atom& a, int depth) {
    auto key = std::make_pair(a, depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (!active_.insert(key).second) return ThreeValued::unknown(depth);  // unstratified loop
    bool outer = incomplete_;
    incomplete_ = false;
    bool found = solve({Goal{{true, a}, depth, nullptr}}, {});
    ThreeValued r = found ? ThreeValued::yes()
                          : (incomplete_ ? ThreeValued::unknown(depth) : ThreeValued::no());
    incomplete_ = outer;
    active_.erase(key);
    memo_.emplace(key, r);
    return r;
  }

 private:
  Clause fresh(const Clause& c) {
    const std::string tag = "#" + std::to_string(++counter_);
    Substitution s;
    for (const auto& v : vars_of(c)) s.emplace(v.name(), Term::var(v.name() + tag, v.type()));
    return apply_subst(c, s);
  }

  // True as soon as one solution of all goals is found.
  bool solve(std::vector<Goal> goals, const Substitution& s) {
    if (goals.empty()) return true;
    std::size_t pick = goals.size();
    for (std::size_t i = 0; i < goals.size() && pick == goals.size(); ++i) {
      if (goals[i].lit.positive) pick = i;
      else if (atom_ground(apply_subst(goals[i].lit.atom, s))) pick = i;
    }
    if (pick == goals.size()) {
      incomplete_ = true;  // only non-ground negative literals left
      return false;
    }
    Goal g = goals[pick];
    goals.erase(goals.begin() + static_cast<std::ptrdiff_t>(pick));
    Atom a = apply_subst(g.lit.atom, s);

    if (!g.lit.positive) {
      ThreeValued r = prove(a, g.budget);
      if (r.is_true()) return false;
      if (!r.definite()) {
        incomplete_ = true;
        return false;
      }
      return solve(std::move(goals), s);
    }

    const bool ground = atom_ground(a);
    if (ground && on_path(a, g.anc)) return false;  // a minimal proof never repeats an atom
    auto it = defs_.find(a.pred);
    if (it == defs_.end()) return false;
    if (g.budget <= 0) {
      incomplete_ = true;
      return false;
    }
    auto anc = ground ? std::make_shared<const Ancestors>(Ancestors{a, g.anc}) : g.anc;
    for (const Clause* c : it->second) {
      Clause k = fresh(*c);
      auto theta = mgu(a, k.head);
      if (!theta) continue;
      Substitution next = *theta;
      for (const auto& [x, t] : s) next.emplace(x, apply_subst(t, *theta));
      std::vector<Goal> sub = goals;
      std::vector<Goal> body;
      for (const auto& l : k.body) body.push_back(Goal{l, g.budget - 1, anc});
      sub.insert(sub.begin() + static_cast<std::ptrdiff_t>(pick), body.begin(), body.end());
      if (solve(std::move(sub), next)) return true;
    }
    return false;
  }

  std::map<std::string, std::vector<const Clause*>> defs_;
  std::map<std::pair<Atom, int>, ThreeValued> memo_;
  std::set<std::pair<Atom, int>> active_;
  bool incomplete_ = false;
  long counter_ = 0;
};

}  // namespace

ThreeValued eval_bounded(const Program& p, const Atom& query, int depth) {
  if (!atom_ground(query)) throw Error("query " + render(query) + " is not ground");
  BoundedProver prover(p);
  return prover.prove(query, depth);
}

}  // namespace omegafold
