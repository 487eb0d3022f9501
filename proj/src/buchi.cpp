#include <algorithm>
#include <deque>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "omegafold/frontends.hpp"
#include "omegafold/parser.hpp"

namespace omegafold {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

bool plain_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return !std::isupper(static_cast<unsigned char>(s[0])) && s[0] != '_';
}

// Breadth-first path from `from` to `to` over states; each entry is the
// index of the transition taken. Empty optional when unreachable.
std::optional<std::vector<std::size_t>> bfs_path(const BuchiAutomaton& a, const std::string& from,
                                                 const std::string& to, bool nonempty) {
  std::map<std::string, std::pair<std::string, std::size_t>> parent;
  std::deque<std::string> queue;
  std::set<std::string> seen;
  if (!nonempty) {
    if (from == to) return std::vector<std::size_t>{};
  }
  queue.push_back(from);
  // With nonempty, `from` is left unmarked so a cycle back to it is found.
  if (!nonempty) seen.insert(from);
  while (!queue.empty()) {
    std::string q = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < a.transitions.size(); ++i) {
      const auto& [src, sym, dst] = a.transitions[i];
      if (src != q || seen.count(dst)) continue;
      seen.insert(dst);
      parent[dst] = {q, i};
      if (dst == to) {
        std::vector<std::size_t> path;
        std::string cur = to;
        do {
          auto [p, t] = parent.at(cur);
          path.push_back(t);
          cur = p;
        } while (cur != from || path.size() == 0);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(dst);
    }
  }
  return std::nullopt;
}

}  // namespace

void validate_buchi(const BuchiAutomaton& a) {
  if (a.states.empty()) throw Error("automaton: no states");
  if (a.sigma.empty()) throw Error("automaton: empty input alphabet");
  for (const auto& q : a.states)
    if (!plain_name(q)) throw Error("automaton: bad state name '" + q + "'");
  for (const auto& s : a.sigma) {
    if (!plain_name(s)) throw Error("automaton: bad symbol name '" + s + "'");
    if (contains(a.states, s)) throw Error("automaton: '" + s + "' is both a state and a symbol");
  }
  for (const auto& n : a.states)
    if (n == "0" || n == "s") throw Error("automaton: state name '" + n + "' is reserved");
  for (const auto& n : a.sigma)
    if (n == "0" || n == "s") throw Error("automaton: symbol name '" + n + "' is reserved");
  if (!contains(a.states, a.initial)) throw Error("automaton: initial state not in Q");
  for (const auto& f : a.finals)
    if (!contains(a.states, f)) throw Error("automaton: final state '" + f + "' not in Q");
  for (const auto& [p, s, q] : a.transitions)
    if (!contains(a.states, p) || !contains(a.states, q) || !contains(a.sigma, s))
      throw Error("automaton: transition " + p + " " + s + " " + q + " out of range");
}

BuchiAutomaton parse_buchi(const std::string& text) {
  BuchiAutomaton a;
  std::string body;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto pct = line.find('%');
    if (pct != std::string::npos) line.erase(pct);
    body += line + "\n";
  }
  bool have_initial = false;
  std::size_t start = 0;
  while (true) {
    auto dot = body.find('.', start);
    std::string stmt = body.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    auto words = split_list(stmt);
    if (!words.empty()) {
      const std::string kw = words[0];
      std::vector<std::string> rest(words.begin() + 1, words.end());
      if (kw == "states") {
        a.states.insert(a.states.end(), rest.begin(), rest.end());
      } else if (kw == "sigma") {
        a.sigma.insert(a.sigma.end(), rest.begin(), rest.end());
      } else if (kw == "final") {
        a.finals.insert(a.finals.end(), rest.begin(), rest.end());
      } else if (kw == "initial") {
        if (rest.size() != 1 || have_initial) throw Error("automaton: exactly one initial state");
        a.initial = rest[0];
        have_initial = true;
      } else if (kw == "trans") {
        if (rest.size() != 3) throw Error("automaton: trans needs 'q a q''");
        a.transitions.emplace_back(rest[0], rest[1], rest[2]);
      } else {
        throw Error("automaton: unknown statement '" + kw + "'");
      }
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (!have_initial) throw Error("automaton: missing initial state");
  validate_buchi(a);
  return a;
}

std::string render_buchi(const BuchiAutomaton& a) {
  std::string out = "states " + join(a.states, ",") + ".\n";
  out += "initial " + a.initial + ".\n";
  if (!a.finals.empty()) out += "final " + join(a.finals, ",") + ".\n";
  out += "sigma " + join(a.sigma, ",") + ".\n";
  for (const auto& [p, s, q] : a.transitions) out += "trans " + p + " " + s + " " + q + ".\n";
  return out;
}

Encoding encode_buchi(const BuchiAutomaton& a) {
  validate_buchi(a);
  std::string t;
  t += "alphabet " + join(a.states, ", ") + ".\n";
  t += "fun 0/0, s/1";
  for (const auto& s : a.sigma) t += ", " + s + "/0";
  t += ".\n";
  t +=
      "pred accepting_run(ilist), run(ilist), not_a_run(ilist), exists_tr(elem, elem),\n"
      "     rejecting(ilist), exists_final(fterm, ilist), nat(fterm),\n"
      "     occ(fterm, ilist, elem), geq(fterm, fterm), initial(elem),\n"
      "     tr(elem, fterm, elem), final(elem).\n"
      "accepting_run(X) :- run(X), not rejecting(X).\n"
      "run(X) :- occ(0, X, S), initial(S), not not_a_run(X).\n"
      "not_a_run(X) :- nat(N), occ(N, X, S1), occ(s(N), X, S2), not exists_tr(S1, S2).\n"
      "exists_tr(S1, S2) :- tr(S1, A, S2).\n"
      "rejecting(X) :- nat(M), not exists_final(M, X).\n"
      "exists_final(M, X) :- geq(N, M), occ(N, X, S), final(S).\n"
      "nat(0).\n"
      "nat(s(N)) :- nat(N).\n"
      "occ(0, [S|X], S).\n"
      "occ(s(N), [S|X], R) :- occ(N, X, R).\n"
      "geq(N, 0).\n"
      "geq(s(N), s(M)) :- geq(N, M).\n";
  t += "initial(" + a.initial + ").\n";
  for (const auto& [p, s, q] : a.transitions) t += "tr(" + p + ", " + s + ", " + q + ").\n";
  for (const auto& f : a.finals) t += "final(" + f + ").\n";
  return {parse_program(t), "accepting_run"};
}

BuchiVerdict buchi_empty_direct(const BuchiAutomaton& a) {
  validate_buchi(a);
  BuchiVerdict v;
  // Finals in declaration order; the first reachable one on a cycle wins.
  for (const auto& f : a.finals) {
    auto stem = bfs_path(a, a.initial, f, false);
    if (!stem) continue;
    auto loop = bfs_path(a, f, f, true);
    if (!loop) continue;
    std::vector<std::string> ru, rv, iu, iv;
    for (std::size_t t : *stem) {
      ru.push_back(std::get<0>(a.transitions[t]));
      iu.push_back(std::get<1>(a.transitions[t]));
    }
    for (std::size_t t : *loop) {
      rv.push_back(std::get<0>(a.transitions[t]));
      iv.push_back(std::get<1>(a.transitions[t]));
    }
    v.empty = false;
    v.run = LassoWord(ru, rv);
    v.input = LassoWord(iu, iv);
    return v;
  }
  return v;
}

bool buchi_accepts(const BuchiAutomaton& a, const LassoWord& input) {
  // Product graph over (state, suffix index); accept iff a reachable node
  // with a final state lies on a cycle.
  std::map<std::string, std::size_t> sid;
  for (std::size_t i = 0; i < a.states.size(); ++i) sid[a.states[i]] = i;
  const std::size_t n = input.positions();
  const std::size_t nodes = a.states.size() * n;
  auto id = [&](std::size_t q, std::size_t k) { return q * n + k; };
  std::vector<std::vector<std::size_t>> succ(nodes);
  for (const auto& [p, s, q] : a.transitions)
    for (std::size_t k = 0; k < n; ++k)
      if (input.at(k) == s) succ[id(sid[p], k)].push_back(id(sid[q], input.next(k)));
  auto reach_from = [&](std::size_t src, bool strict) {
    std::vector<char> seen(nodes, 0);
    std::vector<std::size_t> stack;
    if (strict) {
      for (auto t : succ[src])
        if (!seen[t]) seen[t] = 1, stack.push_back(t);
    } else {
      seen[src] = 1;
      stack.push_back(src);
    }
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (auto t : succ[x])
        if (!seen[t]) seen[t] = 1, stack.push_back(t);
    }
    return seen;
  };
  auto reachable = reach_from(id(sid[a.initial], 0), false);
  for (const auto& f : a.finals)
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t x = id(sid[f], k);
      if (reachable[x] && reach_from(x, true)[x]) return true;
    }
  return false;
}

std::optional<LassoWord> input_for_run(const BuchiAutomaton& a, const LassoWord& run) {
  if (run.at(0) != a.initial) return std::nullopt;
  std::vector<std::string> u, v;
  for (std::size_t i = 0; i < run.positions(); ++i) {
    const std::string& p = run.at(i);
    const std::string& q = run.at(run.next(i));
    std::optional<std::string> letter;
    for (const auto& [src, s, dst] : a.transitions)
      if (src == p && dst == q) {
        letter = s;
        break;
      }
    if (!letter) return std::nullopt;
    (i < run.prefix().size() ? u : v).push_back(*letter);
  }
  return LassoWord(u, v);
}

}  // namespace omegafold
