#include "omegafold/monadic.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "omegafold/error.hpp"
#include "omegafold/oracle.hpp"

namespace omegafold {

std::string MLiteral::to_string() const { return (positive ? "" : "not ") + pred + "(X)"; }

namespace {

std::string set_text(const LiteralSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& l : s) {
    out += (first ? "" : ", ") + l.to_string();
    first = false;
  }
  return out + "}";
}

bool consistent(const LiteralSet& s) {
  for (const auto& l : s)
    if (l.positive && s.count(l.complement())) return false;
  return true;
}

LiteralSet positives(const LiteralSet& s) {
  LiteralSet out;
  for (const auto& l : s)
    if (l.positive) out.insert(l);
  return out;
}

constexpr std::size_t kNodeLimit = 200000;
constexpr std::size_t kProductLimit = 1000000;

}  // namespace

std::string GoalNode::to_string() const {
  return set_text(literals) + " pending " + set_text(pending);
}

bool MonadicProgram::holds_propositional(const MLiteral& l) const {
  return true_props.count(l.pred) ? l.positive : !l.positive;
}

bool MonadicProgram::holds_group(const LiteralSet& g) const {
  auto it = fresh_value.find(g);
  if (it == fresh_value.end()) throw Error("existential group " + set_text(g) + " was not evaluated");
  return it->second;
}

// ---------------------------------------------------------------------------
// Classification.

namespace {

struct Edge {
  std::string from, to;  // head >= body + weight
  int weight;
  std::string clause;
};

std::variant<MonadicClause, MonadicRejection> shape_of(const Clause& c, bool allow_epsilon,
                                                       std::vector<Edge>& edges) {
  MonadicClause mc;
  mc.id = c.id;
  mc.head = c.head.pred;
  auto reject = [&](const std::string& why) { return MonadicRejection{c.id, why}; };
  std::optional<std::string> head_var;
  if (c.head.args.size() == 1) {
    const Term& a = c.head.args[0];
    if (allow_epsilon && a.is_var() && a.type() == Type::ilist) {
      mc.epsilon = true;
      head_var = a.name();
    } else if (a.kind() != Term::Kind::cons || a.head().kind() != Term::Kind::elem ||
               !a.tail().is_var()) {
      return reject("head " + render(c.head) + " is not of the form q([s|X])");
    } else {
      mc.symbol = a.head().name();
      head_var = a.tail().name();
    }
  } else if (!c.head.args.empty()) {
    return reject("head predicate " + c.head.pred + " is neither propositional nor unary");
  }
  std::map<std::string, std::size_t> group_of;
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    const Literal& l = c.body[i];
    MLiteral ml{l.positive, l.atom.pred};
    const std::size_t pos = i + 1;
    int weight = l.positive ? 0 : 1;
    if (l.atom.args.empty()) {
      mc.propositional.emplace_back(pos, ml);
    } else if (l.atom.args.size() == 1 && l.atom.args[0].is_var() &&
               l.atom.args[0].type() == Type::ilist) {
      const std::string& v = l.atom.args[0].name();
      if (head_var && v == *head_var) {
        mc.on_head_var.emplace_back(pos, ml);
      } else {
        weight += 1;
        auto [it, fresh] = group_of.emplace(v, mc.fresh_groups.size());
        if (fresh) mc.fresh_groups.emplace_back();
        mc.fresh_groups[it->second].first.push_back(pos);
        mc.fresh_groups[it->second].second.insert(ml);
      }
    } else {
      return reject("body literal " + render(l) + " is neither propositional nor q(X)");
    }
    edges.push_back({c.head.pred, l.atom.pred, weight, c.id});
  }
  return mc;
}

// Minimal levels satisfying head >= body + weight (longest paths).
std::optional<MonadicRejection> solve_levels(const std::set<std::string>& preds,
                                             const std::vector<Edge>& edges, LevelMapping& lm) {
  for (const auto& p : preds) lm.level[p] = 0;
  for (std::size_t round = 0; round <= preds.size() + 1; ++round) {
    const Edge* changed = nullptr;
    for (const auto& e : edges) {
      if (lm.level[e.from] < lm.level[e.to] + e.weight) {
        lm.level[e.from] = lm.level[e.to] + e.weight;
        changed = &e;
      }
    }
    if (!changed) return std::nullopt;
    if (round == preds.size() + 1)
      return MonadicRejection{"", "no level mapping exists: a cycle through clause " +
                                      changed->clause + " needs " + changed->from +
                                      " strictly above itself"};
  }
  return std::nullopt;
}

}  // namespace

std::variant<MonadicProgram, MonadicRejection> classify_monadic(const Program& p,
                                                                bool allow_epsilon) {
  MonadicProgram m;
  m.program = p;
  std::set<std::string> preds = p.predicates_used();
  for (const auto& q : preds) {
    const auto* types = p.sig.pred_types(q);
    if (types == nullptr || types->empty()) m.propositional.insert(q);
    else if (types->size() == 1 && (*types)[0] == Type::ilist) m.unary.insert(q);
    else return MonadicRejection{"", "predicate " + q + " is neither propositional nor unary ilist"};
  }
  std::vector<Edge> edges;
  for (const auto& c : p.clauses) {
    auto r = shape_of(c, allow_epsilon, edges);
    if (auto* rej = std::get_if<MonadicRejection>(&r)) return *rej;
    m.clauses.push_back(std::get<MonadicClause>(r));
  }
  if (auto rej = solve_levels(preds, edges, m.levels)) return *rej;
  // Declared unary predicates without clauses denote the empty set.
  for (const auto& [q, types] : p.sig.predicates) {
    if (preds.count(q) || types.size() != 1 || types[0] != Type::ilist) continue;
    m.unary.insert(q);
    m.levels.level[q] = 0;
  }
  for (std::size_t i = 0; i < m.clauses.size(); ++i) {
    const auto& c = m.clauses[i];
    if (c.epsilon) m.epsilon_clauses[c.head].push_back(i);
    else if (c.symbol.empty()) m.prop_clauses[c.head].push_back(i);
    else m.by_symbol[c.head][c.symbol].push_back(i);
  }

  // Fix word-independent values level by level: propositional atoms first,
  // then existential groups whose literals sit at this level.
  std::map<int, std::vector<LiteralSet>> groups_at;
  for (const auto& c : m.clauses)
    for (const auto& [_, g] : c.fresh_groups) {
      int lvl = 0;
      for (const auto& l : g) lvl = std::max(lvl, m.levels.of(l.pred) + (l.positive ? 0 : 1));
      groups_at[lvl].push_back(g);
    }
  std::set<int> levels;
  for (const auto& [_, l] : m.levels.level) levels.insert(l);
  for (const auto& [l, _] : groups_at) levels.insert(l);
  for (int lvl : levels) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [head, idx] : m.prop_clauses) {
        if (m.levels.of(head) != lvl || m.true_props.count(head)) continue;
        for (auto i : idx) {
          const auto& c = m.clauses[i];
          bool fires = std::all_of(c.propositional.begin(), c.propositional.end(),
                                   [&](const auto& pl) { return m.holds_propositional(pl.second); });
          for (const auto& [_, g] : c.fresh_groups) fires = fires && m.holds_group(g);
          if (fires) {
            m.true_props.insert(head);
            changed = true;
            break;
          }
        }
      }
    }
    for (const auto& g : groups_at[lvl])
      if (!m.fresh_value.count(g)) m.fresh_value[g] = decide_exists(m, g).exists;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Decision by exploring the breakpoint graph.

namespace {

struct Option {
  LiteralSet adds;
  Choice choice;
};

// Expansion options of one literal under symbol s; empty when it cannot
// be satisfied with this symbol.
std::vector<Option> options_for(const MonadicProgram& t, const MLiteral& lit, const std::string& s) {
  std::vector<Option> out;
  std::vector<std::size_t> idx;
  if (auto p = t.by_symbol.find(lit.pred); p != t.by_symbol.end())
    if (auto q = p->second.find(s); q != p->second.end()) idx = q->second;
  if (lit.positive) {
    for (auto i : idx) {
      const auto& c = t.clauses[i];
      bool ok = std::all_of(c.propositional.begin(), c.propositional.end(),
                            [&](const auto& pl) { return t.holds_propositional(pl.second); });
      for (const auto& [_, g] : c.fresh_groups) ok = ok && t.holds_group(g);
      if (!ok) continue;
      Option o;
      for (const auto& [_, l] : c.on_head_var) o.adds.insert(l);
      o.choice = {lit, {{c.id, 0}}};
      out.push_back(std::move(o));
    }
    return out;
  }
  // Negative: refute every clause, one body literal each.
  std::vector<std::vector<std::pair<std::size_t, std::optional<MLiteral>>>> refutations;
  for (auto i : idx) {
    const auto& c = t.clauses[i];
    std::vector<std::pair<std::size_t, std::optional<MLiteral>>> r;
    std::vector<std::pair<std::size_t, std::optional<MLiteral>>> all;
    for (const auto& [pos, l] : c.on_head_var) all.emplace_back(pos, l.complement());
    for (const auto& [pos, l] : c.propositional)
      if (!t.holds_propositional(l)) all.emplace_back(pos, std::nullopt);
    for (const auto& [ps, g] : c.fresh_groups)
      if (!t.holds_group(g)) all.emplace_back(ps.front(), std::nullopt);
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (all.empty()) return {};
    refutations.push_back(std::move(all));
  }
  std::size_t total = 1;
  for (const auto& r : refutations) {
    total *= r.size();
    if (total > kProductLimit) throw Error("expansion of " + lit.to_string() + " is too large");
  }
  for (std::size_t k = 0; k < total; ++k) {
    Option o;
    o.choice.literal = lit;
    std::size_t rest = k;
    std::vector<std::size_t> digits(refutations.size());
    for (std::size_t j = refutations.size(); j-- > 0;) {
      digits[j] = rest % refutations[j].size();
      rest /= refutations[j].size();
    }
    bool ok = true;
    for (std::size_t j = 0; j < refutations.size(); ++j) {
      const auto& [pos, add] = refutations[j][digits[j]];
      o.choice.picks.emplace_back(t.clauses[idx[j]].id, pos);
      if (add) o.adds.insert(*add);
    }
    if (ok && consistent(o.adds)) out.push_back(std::move(o));
  }
  return out;
}

struct Successor {
  GoalNode node;
  std::vector<Choice> choices;
};

// Successors of n under symbol s, deduplicated, first choice kept.
std::vector<Successor> successors(const MonadicProgram& t, const GoalNode& n, const std::string& s) {
  std::vector<MLiteral> lits(n.literals.begin(), n.literals.end());
  std::vector<std::vector<Option>> opts;
  std::size_t total = 1;
  for (const auto& l : lits) {
    opts.push_back(options_for(t, l, s));
    if (opts.back().empty()) return {};
    total *= opts.back().size();
    if (total > kProductLimit) throw Error("node " + n.to_string() + " has too many successors");
  }
  std::vector<Successor> out;
  std::set<GoalNode> seen;
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rest = k;
    std::vector<std::size_t> digits(lits.size());
    for (std::size_t j = lits.size(); j-- > 0;) {
      digits[j] = rest % opts[j].size();
      rest /= opts[j].size();
    }
    GoalNode next;
    LiteralSet from_pending;
    std::vector<Choice> choices;
    for (std::size_t j = 0; j < lits.size(); ++j) {
      const Option& o = opts[j][digits[j]];
      next.literals.insert(o.adds.begin(), o.adds.end());
      if (n.pending.count(lits[j])) from_pending.insert(o.adds.begin(), o.adds.end());
      choices.push_back(o.choice);
    }
    if (!consistent(next.literals)) continue;
    next.pending = n.pending.empty() ? positives(next.literals) : positives(from_pending);
    if (seen.insert(next).second) out.push_back({std::move(next), std::move(choices)});
  }
  return out;
}

struct GraphEdge {
  std::string symbol;
  std::size_t to;
  std::vector<Choice> choices;
};

}  // namespace

Decision decide_exists(const MonadicProgram& t, const std::string& pred) {
  if (!t.unary.count(pred)) throw Error("predicate " + pred + " is not a unary ilist predicate");
  return decide_exists(t, LiteralSet{{true, pred}});
}

Decision decide_exists(const MonadicProgram& t, const LiteralSet& root) {
  Decision d;
  if (!consistent(root)) return d;
  for (const auto& l : root)
    if (!t.unary.count(l.pred)) throw Error("predicate " + l.pred + " is not a unary ilist predicate");
  if (t.alphabet().empty()) throw Error("empty alphabet");
  if (!t.epsilon_clauses.empty())
    throw Error("clause " + t.clauses[t.epsilon_clauses.begin()->second.front()].id +
                " has a head q(X) that reads no symbol; the program is not monadic");

  std::vector<GoalNode> nodes;
  std::map<GoalNode, std::size_t> index;
  std::vector<std::vector<GraphEdge>> edges;
  auto intern = [&](const GoalNode& n) {
    auto [it, fresh] = index.emplace(n, nodes.size());
    if (fresh) {
      if (nodes.size() >= kNodeLimit) throw Error("tableau search exceeded the node limit");
      nodes.push_back(n);
      edges.emplace_back();
    }
    return std::make_pair(it->second, fresh);
  };

  GoalNode start{root, positives(root)};
  intern(start);
  // Depth-first discovery in alphabet, clause and position order.
  std::vector<std::size_t> stack{0};
  std::vector<bool> expanded(1, false);
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (expanded[v]) continue;
    expanded[v] = true;
    if (nodes[v].literals.empty()) continue;
    std::vector<std::size_t> fresh_nodes;
    for (const auto& s : t.alphabet()) {
      for (auto& succ : successors(t, nodes[v], s)) {
        auto [w, fresh] = intern(succ.node);
        if (fresh) {
          expanded.push_back(false);
          fresh_nodes.push_back(w);
        }
        edges[v].push_back({s, w, std::move(succ.choices)});
      }
    }
    for (auto it = fresh_nodes.rbegin(); it != fresh_nodes.rend(); ++it) stack.push_back(*it);
  }
  d.explored = nodes.size();

  // Tarjan SCCs to find accepting cycles.
  const std::size_t n = nodes.size();
  std::vector<int> comp(n, -1), low(n, 0), num(n, -1);
  std::vector<std::size_t> tstack;
  std::vector<bool> on(n, false);
  int counter = 0, comps = 0;
  std::function<void(std::size_t)> strong = [&](std::size_t v) {
    num[v] = low[v] = counter++;
    tstack.push_back(v);
    on[v] = true;
    for (const auto& e : edges[v]) {
      if (num[e.to] < 0) {
        strong(e.to);
        low[v] = std::min(low[v], low[e.to]);
      } else if (on[e.to]) {
        low[v] = std::min(low[v], num[e.to]);
      }
    }
    if (low[v] == num[v]) {
      while (true) {
        std::size_t w = tstack.back();
        tstack.pop_back();
        on[w] = false;
        comp[w] = comps;
        if (w == v) break;
      }
      ++comps;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (num[v] < 0) strong(v);
  std::vector<bool> cyclic(static_cast<std::size_t>(comps), false);
  for (std::size_t v = 0; v < n; ++v)
    for (const auto& e : edges[v])
      if (comp[e.to] == comp[v]) cyclic[static_cast<std::size_t>(comp[v])] = true;

  std::optional<std::size_t> target;
  bool loop = false;
  for (std::size_t v = 0; v < n && !target; ++v) {
    if (nodes[v].literals.empty()) {
      target = v;
    } else if (nodes[v].pending.empty() && cyclic[static_cast<std::size_t>(comp[v])]) {
      target = v;
      loop = true;
    }
  }
  if (!target) return d;

  // Shortest path root -> target, then a shortest cycle inside the SCC.
  auto bfs = [&](std::size_t from, std::size_t to, bool inside, bool need_step) {
    std::vector<std::optional<std::pair<std::size_t, std::size_t>>> parent(n);  // (node, edge)
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> q;
    if (!need_step && from == to) return std::vector<std::pair<std::size_t, std::size_t>>{};
    q.push_back(from);
    seen[from] = !need_step;
    std::optional<std::pair<std::size_t, std::size_t>> last;
    while (!q.empty() && !last) {
      std::size_t v = q.front();
      q.pop_front();
      for (std::size_t k = 0; k < edges[v].size(); ++k) {
        std::size_t w = edges[v][k].to;
        if (inside && comp[w] != comp[from]) continue;
        if (w == to) {
          last = std::make_pair(v, k);
          break;
        }
        if (seen[w]) continue;
        seen[w] = true;
        parent[w] = std::make_pair(v, k);
        q.push_back(w);
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> path;
    for (auto cur = last; cur; cur = (cur->first == from) ? std::nullopt : parent[cur->first])
      path.push_back(*cur);
    std::reverse(path.begin(), path.end());
    return path;
  };

  Tableau tb;
  tb.root = root;
  tb.filler = t.alphabet().front();
  auto append = [&](const std::vector<std::pair<std::size_t, std::size_t>>& p) {
    for (const auto& [v, k] : p) tb.path.push_back({nodes[v], edges[v][k].symbol, edges[v][k].choices});
  };
  append(bfs(0, *target, false, false));
  if (loop) {
    tb.loop = true;
    tb.loop_target = tb.path.size();
    append(bfs(*target, *target, true, true));
  }
  tb.leaf = nodes[*target];
  if (tb.path.empty() && !loop) throw Error("internal error: root node is empty");

  d.exists = true;
  d.witness = extract_witness(tb);
  std::string why;
  if (!verify_tableau(t, tb, root, &why))
    throw Error("internal error: tableau does not verify: " + why);
  bool all = true;
  for (const auto& l : root) {
    bool v = eval_monadic_lasso(t, l.pred, *d.witness);
    all = all && (l.positive ? v : !v);
  }
  if (!all) throw Error("internal error: witness " + d.witness->to_string() + " fails evaluation");
  d.tableau = std::move(tb);
  return d;
}

LassoWord extract_witness(const Tableau& tb) {
  std::vector<std::string> u, v;
  for (std::size_t i = 0; i < tb.path.size(); ++i)
    (tb.loop && i >= tb.loop_target ? v : u).push_back(tb.path[i].symbol);
  if (!tb.loop) v = {tb.filler};
  if (v.empty()) throw Error("malformed tableau: empty loop");
  return LassoWord(u, v);
}

bool verify_tableau(const MonadicProgram& t, const Tableau& tb, const std::string& pred,
                    std::string* why) {
  return verify_tableau(t, tb, LiteralSet{{true, pred}}, why);
}

bool verify_tableau(const MonadicProgram& t, const Tableau& tb, const LiteralSet& root,
                    std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (tb.path.empty()) return fail("empty path");
  if (tb.path[0].node.literals != root || tb.path[0].node.pending != positives(root))
    return fail("root node does not match the query");
  const auto& sigma = t.alphabet();
  for (std::size_t i = 0; i < tb.path.size(); ++i) {
    const auto& step = tb.path[i];
    const GoalNode& next = i + 1 < tb.path.size() ? tb.path[i + 1].node : tb.leaf;
    const std::string where = "node " + std::to_string(i) + ": ";
    if (std::find(sigma.begin(), sigma.end(), step.symbol) == sigma.end())
      return fail(where + "symbol " + step.symbol + " not in the alphabet");
    if (!consistent(step.node.literals)) return fail(where + "complementary literals");
    if (step.choices.size() != step.node.literals.size())
      return fail(where + "one choice per literal expected");
    LiteralSet produced, from_pending;
    std::size_t k = 0;
    for (const auto& lit : step.node.literals) {
      const Choice& ch = step.choices[k++];
      if (!(ch.literal == lit)) return fail(where + "choices out of order");
      std::vector<const MonadicClause*> matching;
      for (const auto& c : t.clauses)
        if (c.head == lit.pred && c.symbol == step.symbol) matching.push_back(&c);
      LiteralSet adds;
      if (lit.positive) {
        if (ch.picks.size() != 1) return fail(where + "positive literal needs one clause");
        const MonadicClause* c = nullptr;
        for (auto* m : matching)
          if (m->id == ch.picks[0].first) c = m;
        if (!c) return fail(where + ch.picks[0].first + " does not define " + lit.pred + "([" + step.symbol + "|X])");
        for (const auto& [_, l] : c->propositional)
          if (!t.holds_propositional(l)) return fail(where + "clause " + c->id + " has a false propositional literal");
        for (const auto& [_, g] : c->fresh_groups)
          if (!t.holds_group(g)) return fail(where + "clause " + c->id + " has a false existential group");
        for (const auto& [_, l] : c->on_head_var) adds.insert(l);
      } else {
        if (ch.picks.size() != matching.size())
          return fail(where + "every clause of " + lit.pred + " must be refuted");
        for (std::size_t j = 0; j < matching.size(); ++j) {
          const auto* c = matching[j];
          const auto& [cid, pos] = ch.picks[j];
          if (cid != c->id) return fail(where + "refutations out of order");
          bool ok = false;
          for (const auto& [p, l] : c->on_head_var)
            if (p == pos) {
              adds.insert(l.complement());
              ok = true;
            }
          for (const auto& [p, l] : c->propositional)
            if (p == pos) ok = !t.holds_propositional(l);
          for (const auto& [ps, g] : c->fresh_groups)
            if (std::find(ps.begin(), ps.end(), pos) != ps.end()) ok = !t.holds_group(g);
          if (!ok) return fail(where + "position " + std::to_string(pos) + " of " + cid + " is not refuted");
        }
      }
      produced.insert(adds.begin(), adds.end());
      if (step.node.pending.count(lit)) from_pending.insert(adds.begin(), adds.end());
    }
    if (produced != next.literals) return fail(where + "successor literals do not follow from the choices");
    LiteralSet pend = step.node.pending.empty() ? positives(produced) : positives(from_pending);
    if (pend != next.pending) return fail(where + "pending set of the successor is wrong");
  }
  if (!tb.loop) {
    if (!tb.leaf.literals.empty()) return fail("true leaf is not empty");
    return true;
  }
  if (tb.loop_target >= tb.path.size()) return fail("loop target out of range");
  if (!(tb.path[tb.loop_target].node == tb.leaf)) return fail("loop leaf differs from its target");
  bool released = false;
  for (std::size_t i = tb.loop_target; i < tb.path.size(); ++i)
    released = released || tb.path[i].node.pending.empty();
  if (!released) return fail("loop never discharges its pending positive literals");
  return true;
}

std::string render_tableau(const Tableau& tb) {
  std::string out;
  std::string indent;
  for (std::size_t i = 0; i < tb.path.size(); ++i) {
    const auto& s = tb.path[i];
    out += indent + "node " + std::to_string(i) + ": " + s.node.to_string() + "\n";
    out += indent + "  symbol: " + s.symbol + "\n";
    for (const auto& c : s.choices) {
      out += indent + "  " + c.literal.to_string() + " by";
      for (const auto& [id, pos] : c.picks)
        out += " " + id + (pos ? "@" + std::to_string(pos) : "");
      if (c.picks.empty()) out += " (no clause)";
      out += "\n";
    }
    indent += "  ";
  }
  if (tb.loop)
    out += indent + "leaf: loop to node " + std::to_string(tb.loop_target) + " " + tb.leaf.to_string() + "\n";
  else
    out += indent + "leaf: true\n";
  return out;
}

std::string tableau_dot(const Tableau& tb) {
  auto esc = [](std::string s) {
    std::string o;
    for (char c : s) o += c == '"' ? std::string("\\\"") : std::string(1, c);
    return o;
  };
  std::string out = "digraph tableau {\n  node [shape=box];\n";
  for (std::size_t i = 0; i < tb.path.size(); ++i)
    out += "  n" + std::to_string(i) + " [label=\"" + esc(tb.path[i].node.to_string()) + "\"];\n";
  out += "  leaf [label=\"" + (tb.loop ? std::string("loop") : std::string("true")) + "\"];\n";
  for (std::size_t i = 0; i < tb.path.size(); ++i) {
    std::string to = i + 1 < tb.path.size() ? "n" + std::to_string(i + 1) : "leaf";
    out += "  n" + std::to_string(i) + " -> " + to + " [label=\"" + esc(tb.path[i].symbol) + "\"];\n";
  }
  if (tb.loop) out += "  leaf -> n" + std::to_string(tb.loop_target) + " [style=dashed];\n";
  return out + "}\n";
}

// ---------------------------------------------------------------------------
// Exact evaluation on a lasso word.

bool eval_monadic_lasso(const MonadicProgram& t, const std::string& pred, const LassoWord& w) {
  if (!t.unary.count(pred)) throw Error("predicate " + pred + " is not a unary ilist predicate");
  const std::size_t n = w.positions();
  std::map<std::string, std::vector<char>> val;
  std::map<int, std::vector<std::string>> by_level;
  for (const auto& q : t.unary) {
    val[q].assign(n, 0);
    by_level[t.levels.of(q)].push_back(q);
  }
  // Body literals on the head variable read position j.
  auto fires_at = [&](const MonadicClause& c, std::size_t j) {
    for (const auto& [_, l] : c.propositional)
      if (!t.holds_propositional(l)) return false;
    for (const auto& [_, g] : c.fresh_groups)
      if (!t.holds_group(g)) return false;
    for (const auto& [_, l] : c.on_head_var)
      if ((val[l.pred][j] != 0) != l.positive) return false;
    return true;
  };
  for (const auto& [lvl, preds] : by_level) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& q : preds) {
        for (std::size_t i = 0; i < n; ++i) {
          if (val[q][i]) continue;
          if (auto eit = t.epsilon_clauses.find(q); eit != t.epsilon_clauses.end()) {
            for (auto ci : eit->second)
              if (fires_at(t.clauses[ci], i)) {
                val[q][i] = 1;
                changed = true;
                break;
              }
            if (val[q][i]) continue;
          }
          auto pit = t.by_symbol.find(q);
          if (pit == t.by_symbol.end()) continue;
          auto sit = pit->second.find(w.at(i));
          if (sit == pit->second.end()) continue;
          const std::size_t j = w.next(i);
          for (auto ci : sit->second) {
            if (fires_at(t.clauses[ci], j)) {
              val[q][i] = 1;
              changed = true;
              break;
            }
          }
        }
      }
    }
  }
  return val[pred][0] != 0;
}

}  // namespace omegafold
