#include "omegafold/strata.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace omegafold {

int LevelMapping::of(const std::string& p) const {
  auto it = level.find(p);
  if (it == level.end()) throw Error("no level for predicate " + p);
  return it->second;
}

std::string LevelMapping::to_string() const {
  std::string out;
  for (const auto& [p, l] : level) {
    out += "level " + p + " = " + std::to_string(l);
    if (auto it = measured.find(p); it != measured.end())
      out += " measure " + std::to_string(it->second + 1);
    out += "\n";
  }
  return out;
}

namespace {

void add_norm(const Term& t, long k, Stratum& s) {
  switch (t.kind()) {
    case Term::Kind::var: s.coeff[t.name()] += k; return;
    case Term::Kind::elem: s.constant += k; return;
    case Term::Kind::app:
      s.constant += k;
      for (const auto& a : t.args()) add_norm(a, k, s);
      return;
    default: return;
  }
}

}  // namespace

Stratum stratum_of(const Atom& a, const LevelMapping& lm) {
  Stratum s;
  s.rank = lm.of(a.pred);
  if (auto it = lm.measured.find(a.pred); it != lm.measured.end() && it->second < a.args.size())
    add_norm(a.args[it->second], 1, s);
  return s;
}

Stratum stratum_of(const Literal& l, const LevelMapping& lm) {
  Stratum s = stratum_of(l.atom, lm);
  if (!l.positive) s.constant += 1;
  return s;
}

bool dominates(const Stratum& a, const Stratum& b) {
  if (a.rank != b.rank) return a.rank > b.rank;
  if (a.constant < b.constant) return false;
  for (const auto& [x, k] : b.coeff) {
    auto it = a.coeff.find(x);
    if ((it == a.coeff.end() ? 0 : it->second) < k) return false;
  }
  return true;
}

bool same_stratum(const Stratum& a, const Stratum& b) {
  auto nz = [](const std::map<std::string, long>& m) {
    std::map<std::string, long> out;
    for (const auto& [x, k] : m)
      if (k != 0) out.emplace(x, k);
    return out;
  };
  return a.rank == b.rank && a.constant == b.constant && nz(a.coeff) == nz(b.coeff);
}

std::vector<StratViolation> check_stratified(const Clause& c, const LevelMapping& lm) {
  std::vector<StratViolation> out;
  const Stratum h = stratum_of(c.head, lm);
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    if (!dominates(h, stratum_of(c.body[i], lm)))
      out.push_back({c.id, i + 1,
                     "level of " + render(c.head) + " is below level of " + render(c.body[i])});
  }
  return out;
}

std::vector<StratViolation> check_stratified(const Program& p, const LevelMapping& lm) {
  std::vector<StratViolation> out;
  for (const auto& c : p.clauses) {
    auto v = check_stratified(c, lm);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

std::set<std::size_t> sigma_maximal_atoms(const Clause& c, const LevelMapping& lm) {
  std::set<std::size_t> out;
  std::vector<Stratum> st;
  for (const auto& l : c.body) st.push_back(stratum_of(l, lm));
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    if (!c.body[i].positive) continue;
    bool max = true;
    for (std::size_t j = 0; j < c.body.size() && max; ++j) max = dominates(st[i], st[j]);
    if (max) out.insert(i + 1);
  }
  return out;
}

bool is_sigma_tight(const Clause& c, const LevelMapping& lm) {
  const Stratum h = stratum_of(c.head, lm);
  for (auto i : sigma_maximal_atoms(c, lm))
    if (same_stratum(h, stratum_of(c.body[i - 1], lm))) return true;
  return false;
}

int minimal_head_level(const std::vector<Clause>& clauses, const LevelMapping& lm) {
  int lvl = 0;
  for (const auto& c : clauses)
    for (const auto& l : c.body) {
      Stratum s = stratum_of(l, lm);
      bool finite_part = s.constant != 0 ||
                         std::any_of(s.coeff.begin(), s.coeff.end(),
                                     [](const auto& kv) { return kv.second != 0; });
      lvl = std::max(lvl, s.rank + (finite_part ? 1 : 0));
    }
  return lvl;
}

// ---- inference ----

namespace {

struct Edge {
  std::string to;
  bool negative;
};

std::vector<std::vector<std::string>> sccs(const std::vector<std::string>& nodes,
                                           const std::map<std::string, std::vector<Edge>>& g) {
  // Tarjan; components come out dependencies-first.
  std::map<std::string, int> index, low;
  std::set<std::string> on;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> out;
  int counter = 0;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on.insert(v);
    if (auto it = g.find(v); it != g.end())
      for (const auto& e : it->second) {
        if (!index.count(e.to)) {
          visit(e.to);
          low[v] = std::min(low[v], low[e.to]);
        } else if (on.count(e.to)) {
          low[v] = std::min(low[v], index[e.to]);
        }
      }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on.erase(w);
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (const auto& n : nodes)
    if (!index.count(n)) visit(n);
  return out;
}

// A path from `from` to `to` inside `comp`, as a predicate list.
std::vector<std::string> path_within(const std::string& from, const std::string& to,
                                     const std::set<std::string>& comp,
                                     const std::map<std::string, std::vector<Edge>>& g) {
  std::map<std::string, std::string> parent;
  std::vector<std::string> queue{from};
  parent[from] = from;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto v = queue[i];
    if (v == to && i > 0) break;
    if (auto it = g.find(v); it != g.end())
      for (const auto& e : it->second)
        if (comp.count(e.to) && !parent.count(e.to)) {
          parent[e.to] = v;
          queue.push_back(e.to);
        }
  }
  std::vector<std::string> path;
  if (!parent.count(to)) return path;
  for (std::string v = to; v != from; v = parent[v]) path.push_back(v);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::variant<LevelMapping, Unstratifiable> infer_level_mapping(const Program& p,
                                                               const LevelMapping& fixed) {
  std::vector<std::string> nodes;
  for (const auto& [name, _] : p.sig.predicates) nodes.push_back(name);
  std::map<std::string, std::vector<Edge>> g;
  for (const auto& c : p.clauses)
    for (const auto& l : c.body) g[c.head.pred].push_back({l.atom.pred, !l.positive});

  LevelMapping lm;
  for (const auto& comp : sccs(nodes, g)) {
    std::set<std::string> in(comp.begin(), comp.end());
    int rank = 0;
    bool inner_negative = false;
    std::string neg_from, neg_to;
    for (const auto& v : comp)
      if (auto it = g.find(v); it != g.end())
        for (const auto& e : it->second) {
          if (in.count(e.to)) {
            if (e.negative && !inner_negative) {
              inner_negative = true;
              neg_from = v;
              neg_to = e.to;
            }
            continue;
          }
          rank = std::max(rank, lm.of(e.to) + (e.negative ? 1 : 0));
        }
    std::optional<int> pinned;
    for (const auto& v : comp)
      if (auto it = fixed.level.find(v); it != fixed.level.end()) {
        if (pinned && *pinned != it->second)
          return Unstratifiable{comp, "predicates " + comp.front() + " and " + v +
                                          " are mutually recursive but pinned to different levels"};
        pinned = it->second;
      }
    if (pinned) {
      if (*pinned < rank)
        return Unstratifiable{{comp.front()}, "pinned level " + std::to_string(*pinned) +
                                                   " for " + comp.front() + " is below required " +
                                                   std::to_string(rank)};
      rank = *pinned;
    }
    for (const auto& v : comp) lm.level[v] = rank;

    bool need_measure = inner_negative;
    for (const auto& v : comp)
      if (fixed.measured.count(v)) need_measure = true;
    if (!need_measure) continue;

    // Try measured arguments: pinned ones first, otherwise every
    // combination of finite-term argument positions.
    std::vector<std::vector<std::size_t>> options;
    for (const auto& v : comp) {
      std::vector<std::size_t> opt;
      if (auto it = fixed.measured.find(v); it != fixed.measured.end()) {
        opt.push_back(it->second);
      } else {
        const auto* ts = p.sig.pred_types(v);
        for (std::size_t i = 0; ts && i < ts->size(); ++i)
          if ((*ts)[i] != Type::ilist) opt.push_back(i);
      }
      if (opt.empty()) opt.push_back(SIZE_MAX);  // unmeasured
      options.push_back(opt);
    }
    std::vector<std::size_t> pick(comp.size(), 0);
    bool found = false;
    while (true) {
      LevelMapping trial = lm;
      for (std::size_t k = 0; k < comp.size(); ++k)
        if (options[k][pick[k]] != SIZE_MAX) trial.measured[comp[k]] = options[k][pick[k]];
      bool ok = true;
      for (const auto& c : p.clauses) {
        if (!in.count(c.head.pred)) continue;
        if (!check_stratified(c, trial).empty()) {
          ok = false;
          break;
        }
      }
      if (ok) {
        lm = trial;
        found = true;
        break;
      }
      std::size_t k = 0;
      while (k < comp.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
      if (k == comp.size()) break;
    }
    if (!found) {
      auto back = path_within(neg_to, neg_from, in, g);
      std::vector<std::string> cycle{neg_from};
      if (neg_from == neg_to) {
        cycle.push_back(neg_to);
      } else {
        cycle.insert(cycle.end(), back.begin(), back.end());
      }
      std::string msg = "negative cycle:";
      for (std::size_t i = 0; i < cycle.size(); ++i)
        msg += (i == 0 ? " " : (i == 1 ? " -not-> " : " -> ")) + cycle[i];
      return Unstratifiable{cycle, msg};
    }
  }
  return lm;
}

void parse_level_line(const std::string& line, LevelMapping& lm) {
  std::istringstream in(line);
  std::string kw, p, eq, word;
  int lvl = 0;
  if (!(in >> kw >> p >> eq >> lvl) || kw != "level" || eq != "=")
    throw Error("malformed level line '" + line + "'");
  lm.level[p] = lvl;
  if (in >> word) {
    std::size_t pos = 0;
    if (word != "measure" || !(in >> pos) || pos == 0)
      throw Error("malformed level line '" + line + "'");
    lm.measured[p] = pos - 1;
  }
}

}  // namespace omegafold
