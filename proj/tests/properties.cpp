// Randomized properties. Every generator draws from one seed (--seed=N).
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "omegafold/frontends.hpp"
#include "omegafold/lasso_search.hpp"
#include "omegafold/monadic.hpp"
#include "omegafold/oracle.hpp"
#include "omegafold/parser.hpp"
#include "omegafold/strata.hpp"
#include "omegafold/transform.hpp"
#include "omegafold/unify.hpp"
#include "support.hpp"

using namespace omegafold;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 r(test::seed());
  return r;
}

int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }
bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng()); }

// ---------------------------------------------------------------------------
// Unification against brute-force ground substitutions.

// Own term representation, so the reference never touches the library's
// substitution code. fn: 0 a/0, 1 b/0, 2 f/1, 3 g/2; -1 is a variable.
struct T {
  int fn = -1;
  int var = 0;
  std::vector<T> kids;
};

const char* kFn[] = {"a", "b", "f", "g"};
const int kArity[] = {0, 0, 1, 2};
const char* kVar[] = {"X", "Y"};

T random_term(int depth) {
  if (depth == 0 || coin(0.3)) {
    if (coin(0.5)) return {-1, pick(0, 1), {}};
    return {pick(0, 1), 0, {}};
  }
  T t{pick(2, 3), 0, {}};
  for (int i = 0; i < kArity[t.fn]; ++i) t.kids.push_back(random_term(depth - 1));
  return t;
}

// Second term of a pair: often a perturbed copy of the first so that
// unifiable pairs are common.
T mutate(const T& t, int depth) {
  if (coin(0.25) || depth == 0) return random_term(std::max(depth, 1));
  if (t.fn < 0) return coin(0.5) ? t : random_term(depth);
  T out{t.fn, 0, {}};
  for (const auto& k : t.kids) out.kids.push_back(mutate(k, depth - 1));
  return out;
}

Term to_term(const T& t) {
  if (t.fn < 0) return Term::var(kVar[t.var], Type::fterm);
  std::vector<Term> kids;
  for (const auto& k : t.kids) kids.push_back(to_term(k));
  return Term::app(kFn[t.fn], kids);
}

T from_term(const Term& t) {
  if (t.is_var()) return {-1, t.name() == "X" ? 0 : 1, {}};
  T out;
  for (int i = 0; i < 4; ++i)
    if (t.name() == kFn[i]) out.fn = i;
  REQUIRE(out.fn >= 0);
  for (const auto& k : t.args()) out.kids.push_back(from_term(k));
  return out;
}

std::vector<T> ground_universe(int depth) {
  std::vector<T> out{{0, 0, {}}, {1, 0, {}}};
  for (int d = 1; d <= depth; ++d) {
    std::vector<T> next = out;
    for (const auto& x : out) next.push_back({2, 0, {x}});
    for (const auto& x : out)
      for (const auto& y : out) next.push_back({3, 0, {x, y}});
    // Keep each ground term once.
    std::vector<T> dedup;
    std::set<std::string> seen;
    for (const auto& t : next) {
      std::string key = render(to_term(t));
      if (seen.insert(key).second) dedup.push_back(t);
    }
    out = dedup;
  }
  return out;
}

// s[0], s[1] ground terms for X and Y.
bool equal_under(const T& a, const T& b, const T* const* s) {
  const T& x = a.fn < 0 ? *s[a.var] : a;
  const T& y = b.fn < 0 ? *s[b.var] : b;
  if (x.fn != y.fn) return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!equal_under(x.kids[i], y.kids[i], s)) return false;
  return true;
}

bool contains_var(const T& t, int v) {
  if (t.fn < 0) return t.var == v;
  for (const auto& k : t.kids)
    if (contains_var(k, v)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Random monadic programs with an independent evaluator.

struct RClause {
  int head;
  int sym;
  std::vector<std::pair<bool, int>> body;  // (positive, predicate) over the tail
};

struct RProg {
  int nsym = 2;
  int npred = 3;
  std::vector<int> level;
  std::vector<RClause> clauses;

  static std::string sym(int s) { return std::string(1, static_cast<char>('a' + s)); }
  static std::string pred(int p) { return "p" + std::to_string(p); }

  std::vector<std::string> alphabet() const {
    std::vector<std::string> out;
    for (int s = 0; s < nsym; ++s) out.push_back(sym(s));
    return out;
  }

  std::string text() const {
    std::ostringstream os;
    os << "alphabet ";
    for (int s = 0; s < nsym; ++s) os << (s ? ", " : "") << sym(s);
    os << ".\npred ";
    for (int p = 0; p < npred; ++p) os << (p ? ", " : "") << pred(p) << "(ilist)";
    os << ".\n";
    for (const auto& c : clauses) {
      os << pred(c.head) << "([" << sym(c.sym) << "|X])";
      for (std::size_t i = 0; i < c.body.size(); ++i)
        os << (i ? ", " : " :- ") << (c.body[i].first ? "" : "not ") << pred(c.body[i].second) << "(X)";
      os << ".\n";
    }
    return os.str();
  }

  // Truth vector at a position from the vector at the next position. Bodies
  // only read the next position, so no fixpoint is needed here.
  std::uint32_t step(int s, std::uint32_t next) const {
    std::uint32_t out = 0;
    for (const auto& c : clauses) {
      if (c.sym != s) continue;
      bool ok = true;
      for (auto [pos, q] : c.body) ok = ok && (((next >> q) & 1u) != 0) == pos;
      if (ok) out |= 1u << c.head;
    }
    return out;
  }

  // Least model on the cycle v, level by level; vector at position 0.
  std::uint32_t cycle(const std::vector<int>& v) const {
    const std::size_t n = v.size();
    std::vector<std::uint32_t> val(n, 0);
    const int top = *std::max_element(level.begin(), level.end());
    for (int l = 0; l <= top; ++l) {
      std::uint32_t mask = 0;
      for (int p = 0; p < npred; ++p)
        if (level[p] == l) mask |= 1u << p;
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
          std::uint32_t got = (step(v[i], val[(i + 1) % n]) & mask) | (val[i] & ~mask);
          if (got != val[i]) {
            val[i] = got;
            changed = true;
          }
        }
      }
    }
    return val[0];
  }

  std::uint32_t eval(const std::vector<int>& u, const std::vector<int>& v) const {
    std::uint32_t s = cycle(v);
    for (std::size_t i = u.size(); i-- > 0;) s = step(u[i], s);
    return s;
  }

  std::vector<int> encode(const std::vector<std::string>& w) const {
    std::vector<int> out;
    for (const auto& x : w) out.push_back(x[0] - 'a');
    return out;
  }

  std::uint32_t eval(const LassoWord& w) const { return eval(encode(w.prefix()), encode(w.period())); }

  // Union of truth vectors over all lassos with |u| <= pb, 1 <= |v| <= vb.
  std::set<std::uint32_t> reachable(int pb, int vb) const {
    std::set<std::uint32_t> states;
    std::vector<int> v;
    for (int len = 1; len <= vb; ++len) {
      v.assign(static_cast<std::size_t>(len), 0);
      for (;;) {
        states.insert(cycle(v));
        std::size_t i = 0;
        while (i < v.size() && ++v[i] == nsym) v[i++] = 0;
        if (i == v.size()) break;
      }
    }
    std::set<std::uint32_t> frontier = states;
    for (int k = 0; k < pb; ++k) {
      std::set<std::uint32_t> next;
      for (auto s : frontier)
        for (int x = 0; x < nsym; ++x) {
          auto t = step(x, s);
          if (states.insert(t).second) next.insert(t);
        }
      frontier = std::move(next);
    }
    return states;
  }
};

RProg random_monadic(int max_pred, int max_sym) {
  RProg p;
  p.nsym = pick(1, max_sym);
  p.npred = pick(1, max_pred);
  for (int i = 0; i < p.npred; ++i) p.level.push_back(pick(0, 2));
  const int n = pick(1, 2 * p.npred + 2);
  for (int i = 0; i < n; ++i) {
    RClause c{pick(0, p.npred - 1), pick(0, p.nsym - 1), {}};
    const int len = pick(0, 3);
    for (int j = 0; j < len; ++j) {
      const int q = pick(0, p.npred - 1);
      const bool pos = coin(0.55);
      // Positive literals may stay at the head's level; negative ones must drop.
      if (pos && p.level[q] <= p.level[c.head]) c.body.push_back({true, q});
      if (!pos && p.level[q] < p.level[c.head]) c.body.push_back({false, q});
    }
    p.clauses.push_back(c);
  }
  return p;
}

MonadicProgram classify(const RProg& r) {
  auto res = classify_monadic(parse_program(r.text()));
  if (auto* rej = std::get_if<MonadicRejection>(&res)) FAIL("rejected " << rej->reason << "\n" << r.text());
  return std::get<MonadicProgram>(res);
}

// ---------------------------------------------------------------------------
// Stratification after every step.

bool stratified_now(const TransformState& st, std::string* why) {
  for (const auto* prog : {&st.current}) {
    auto v = check_stratified(*prog, st.levels);
    if (!v.empty()) {
      *why = v[0].clause + ": " + v[0].message;
      return false;
    }
  }
  auto v = check_stratified(st.p0_with_defs(), st.levels);
  if (!v.empty()) {
    *why = "P0+Defs " + v[0].clause + ": " + v[0].message;
    return false;
  }
  return true;
}

// Replays a script one step at a time and checks each intermediate program.
std::size_t check_script_steps(const Program& p0, const std::string& script_file) {
  auto script = parse_script(test::read_fixture(script_file));
  auto st = initial_state(p0, script.levels);
  std::string why;
  CHECK_MESSAGE(stratified_now(st, &why), why);
  std::size_t n = 0;
  for (const auto& inv : script.steps) {
    st = apply_invocation(st, inv);
    ++n;
    INFO(script_file << " step " << n << ": " << inv.text);
    CHECK_MESSAGE(stratified_now(st, &why), why);
  }
  return n;
}

}  // namespace

TEST_CASE("mgu agrees with brute-force ground unifiers") {
  const auto universe = ground_universe(2);
  std::size_t pairs = 0, unifiable = 0, ground_hits = 0;
  for (; pairs < 1000; ++pairs) {
    const T a = random_term(2);
    const T b = coin(0.6) ? mutate(a, 2) : random_term(2);
    const Term ta = to_term(a), tb = to_term(b);
    auto s = mgu(ta, tb);
    INFO("pair " << render(ta) << " = " << render(tb));

    // Bindings of the mgu in the reference representation.
    T bound[2] = {{-1, 0, {}}, {-1, 1, {}}};
    if (s) {
      ++unifiable;
      for (const auto& [v, t] : *s) {
        REQUIRE((v == "X" || v == "Y"));
        bound[v == "X" ? 0 : 1] = from_term(t);
      }
      // Idempotent: no bound variable occurs in a binding.
      for (const auto& [v, t] : *s)
        for (int k = 0; k < 2; ++k)
          if (s->count(kVar[k])) CHECK_FALSE(contains_var(from_term(t), k));
      CHECK(render(apply_subst(ta, *s)) == render(apply_subst(tb, *s)));
    }

    bool any = false;
    for (const auto& gx : universe)
      for (const auto& gy : universe) {
        const T* g[2] = {&gx, &gy};
        if (!equal_under(a, b, g)) continue;
        any = true;
        ++ground_hits;
        REQUIRE(s);
        // Most general: the ground unifier factors through the mgu.
        for (int k = 0; k < 2; ++k) {
          T var{-1, k, {}};
          CHECK(equal_under(bound[k], var, g));
        }
      }
    // An mgu with shallow bindings has a ground instance in the universe.
    if (s && !any) {
      std::function<int(const T&)> depth = [&](const T& t) {
        int d = 0;
        for (const auto& k : t.kids) d = std::max(d, 1 + depth(k));
        return d;
      };
      CHECK(std::max(depth(bound[0]), depth(bound[1])) > 2);
    }
  }
  MESSAGE("mgu pairs: " << pairs << ", unifiable: " << unifiable << ", ground unifiers checked: " << ground_hits);
  CHECK(pairs >= 1000);
  CHECK(unifiable > 100);
}

TEST_CASE("negate_to_dnf is the negation, by truth table") {
  std::size_t cases = 0;
  for (int round = 0; round < 400; ++round) {
    const int atoms = pick(1, 10);
    const int m = pick(0, 4);
    std::vector<std::vector<Literal>> bodies;
    for (int i = 0; i < m; ++i) {
      std::vector<Literal> body;
      const int len = pick(1, 3);
      for (int j = 0; j < len; ++j) body.push_back({coin(), Atom{"a" + std::to_string(pick(0, atoms - 1)), {}}});
      bodies.push_back(body);
    }
    auto dnf = negate_to_dnf(bodies);
    auto holds = [](const std::vector<Literal>& conj, unsigned assign) {
      for (const auto& l : conj) {
        const unsigned idx = static_cast<unsigned>(std::stoi(l.atom.pred.substr(1)));
        if ((((assign >> idx) & 1u) != 0) != l.positive) return false;
      }
      return true;
    };
    for (unsigned assign = 0; assign < (1u << atoms); ++assign) {
      bool in = false;
      for (const auto& b : bodies) in = in || holds(b, assign);
      bool out = false;
      for (const auto& c : dnf) out = out || holds(c, assign);
      if (out == in) {
        std::ostringstream os;
        for (const auto& b : bodies) os << "(" << render_body(b) << ") ";
        FAIL_CHECK("not a negation: " << os.str() << " assignment " << assign);
        break;
      }
    }
    ++cases;
  }
  MESSAGE("dnf cases: " << cases);
}

TEST_CASE("decide_exists agrees with the lasso oracle") {
  std::size_t programs = 0, queries = 0, yes = 0, disagreements = 0, cross = 0, beyond = 0;
  for (; programs < 500; ++programs) {
    RProg r = random_monadic(5, 3);
    INFO("program:\n" << r.text());
    MonadicProgram t = classify(r);
    const auto alpha = r.alphabet();

    // The reference evaluator must match the library on small lassos.
    auto words = enumerate_lassos(alpha, 2, 3);
    auto mismatch = search_lassos_parallel(words, [&](const LassoWord& w) {
      const std::uint32_t mine = r.eval(w);
      for (int p = 0; p < r.npred; ++p)
        if (eval_monadic_lasso(t, RProg::pred(p), w) != (((mine >> p) & 1u) != 0)) return true;
      return false;
    });
    cross += mismatch.checked;
    CHECK_MESSAGE(mismatch.satisfying == 0,
                  "evaluators differ on " << (mismatch.first ? mismatch.first->to_string() : "?"));

    const auto states = r.reachable(6, 6);
    for (int p = 0; p < r.npred; ++p) {
      ++queries;
      bool oracle = false;
      for (auto s : states) oracle = oracle || ((s >> p) & 1u) != 0;
      auto d = decide_exists(t, RProg::pred(p));
      if (d.exists) {
        ++yes;
        REQUIRE(d.witness);
        const bool real = ((r.eval(*d.witness) >> p) & 1u) != 0;
        REQUIRE(d.tableau);
        const bool checked = verify_tableau(t, *d.tableau, RProg::pred(p));
        if (!real || !checked) {
          ++disagreements;
          FAIL_CHECK("bad witness " << d.witness->to_string() << " for " << RProg::pred(p));
        } else if (!oracle) {
          ++beyond;  // witness longer than the oracle bound
        }
      } else if (oracle) {
        ++disagreements;
        FAIL_CHECK("decide says no, oracle finds a word for " << RProg::pred(p));
      }
    }
  }
  MESSAGE("programs: " << programs << ", queries: " << queries << ", yes: " << yes
                       << ", witnesses beyond 6/6: " << beyond << ", cross-checked lassos: " << cross
                       << ", disagreements: " << disagreements);
  CHECK(disagreements == 0);
}

TEST_CASE("bounded evaluation is monotone and spelling invariant") {
  std::size_t cases = 0, definite = 0;
  for (; cases < 500; ++cases) {
    RProg r = random_monadic(4, 2);
    auto prog = parse_program(r.text());
    std::vector<int> u(static_cast<std::size_t>(pick(0, 3))), v(static_cast<std::size_t>(pick(1, 3)));
    for (auto& x : u) x = pick(0, r.nsym - 1);
    for (auto& x : v) x = pick(0, r.nsym - 1);
    const int p = pick(0, r.npred - 1);
    auto spell = [](const std::vector<int>& w) {
      std::string s;
      for (int x : w) s += RProg::sym(x);
      return s;
    };
    const std::string U = spell(u), V = spell(v);
    const std::size_t cut = static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1));
    const std::string V1 = V.substr(0, cut), V2 = V.substr(cut);
    const std::vector<std::string> spellings = {U + "(" + V + ")^w", U + V + "(" + V + ")^w",
                                                U + V1 + "(" + V2 + V1 + ")^w", U + "(" + V + V + ")^w"};
    const std::string q = RProg::pred(p);
    INFO("program:\n" << r.text() << "query " << q << "(" << spellings[0] << ")");
    const bool exact = ((r.eval(u, v) >> p) & 1u) != 0;

    std::optional<ThreeValued> first;
    for (int depth = 1; depth <= 8; ++depth) {
      auto val = eval_bounded(prog, parse_ground_atom(prog.sig, q + "(" + spellings[0] + ")"), depth);
      if (first) CHECK(val == *first);  // once definite, deeper bounds agree
      if (val.definite()) {
        CHECK(val.is_true() == exact);
        if (!first) first = val;
      }
    }
    definite += first.has_value();
    auto base = eval_bounded(prog, parse_ground_atom(prog.sig, q + "(" + spellings[0] + ")"), 8);
    for (std::size_t k = 1; k < spellings.size(); ++k)
      CHECK(eval_bounded(prog, parse_ground_atom(prog.sig, q + "(" + spellings[k] + ")"), 8) == base);
  }
  MESSAGE("bounded cases: " << cases << ", definite within depth 8: " << definite);
}

TEST_CASE("every step of the fixture derivations keeps the program stratified") {
  std::size_t steps = 0;
  steps += check_script_steps(parse_program(test::read_fixture("even_odd.ofp")), "even_odd.script");
  steps += check_script_steps(parse_program(test::read_fixture("lossy_fold.ofp")), "lossy_fold.script");
  steps += check_script_steps(encode_buchi(parse_buchi(test::read_fixture("buchi_two_state.aut"))).program,
                              "buchi_two_state.script");
  const std::vector<std::string> ab{"a", "b"};
  auto fwd = encode_containment(parse_omega_regex("a^w"), parse_omega_regex("(b*a)^w"), ab);
  steps += check_script_steps(fwd.program, "regex_a_in_bstara.script");
  auto rev = encode_containment(parse_omega_regex("(b*a)^w"), parse_omega_regex("a^w"), ab);
  steps += check_script_steps(rev.program, "regex_bstara_in_a.script");
  MESSAGE("fixture steps checked: " << steps);
}

TEST_CASE("random rule sequences keep the program stratified") {
  const std::vector<std::string> bases = {
      test::read_fixture("only_a.ofp"), test::read_fixture("lossy_fold.ofp"),
      "pred a, b, c, d. a :- b, not c. b :- d. b. c :- not d. d.",
      "alphabet a, b. pred p(ilist), q(ilist), r(ilist). p([a|X]) :- q(X), not r(X). "
      "q([b|X]) :- q(X). q([a|X]). r(X) :- not q(X)."};
  std::size_t sequences = 0, applied = 0;
  for (; sequences < 200; ++sequences) {
    const std::string& text = bases[static_cast<std::size_t>(pick(0, static_cast<int>(bases.size()) - 1))];
    auto st = initial_state(parse_program(text));
    std::string why;
    int fresh = 0;
    for (int k = 0; k < 8; ++k) {
      const auto& cs = st.current.clauses;
      if (cs.empty()) break;
      const Clause c = cs[static_cast<std::size_t>(pick(0, static_cast<int>(cs.size()) - 1))];
      const std::size_t n = c.body.size();
      try {
        switch (pick(0, 5)) {
          case 0: {
            if (n == 0) continue;
            // Definition over a slice of an existing body.
            const std::size_t from = static_cast<std::size_t>(pick(0, static_cast<int>(n) - 1));
            std::vector<Literal> body(c.body.begin() + static_cast<std::ptrdiff_t>(from), c.body.end());
            auto vars = vars_of(body);
            std::string head = "nd" + std::to_string(sequences) + "_" + std::to_string(fresh++);
            std::vector<Term> ilist;
            for (const auto& v : vars)
              if (v.type() == Type::ilist) ilist.push_back(v);
            if (ilist.size() > 1) continue;
            if (!ilist.empty()) head += "(" + render(ilist[0]) + ")";
            st = define(st, {{"", head + " :- " + render_body(body)}});
            break;
          }
          case 1:
            if (n == 0) continue;
            st = unfold_pos(st, c.id, static_cast<std::size_t>(pick(1, static_cast<int>(n))));
            break;
          case 2:
            if (n == 0) continue;
            st = unfold_neg(st, c.id, static_cast<std::size_t>(pick(1, static_cast<int>(n))));
            break;
          case 3: {
            if (st.defs.empty() || n == 0) continue;
            const auto& d = st.def_clauses.at(st.defs[static_cast<std::size_t>(pick(0, static_cast<int>(st.defs.size()) - 1))]);
            // Contiguous window with the definition's body length.
            if (d.body.size() > n) continue;
            const std::size_t from = static_cast<std::size_t>(pick(0, static_cast<int>(n - d.body.size())));
            std::vector<std::size_t> ps;
            for (std::size_t i = 0; i < d.body.size(); ++i) ps.push_back(from + i + 1);
            st = fold_pos(st, c.id, d.id, ps);
            break;
          }
          case 4: {
            const auto& other = cs[static_cast<std::size_t>(pick(0, static_cast<int>(cs.size()) - 1))];
            st = subsume(st, c.id, other.id);
            break;
          }
          default:
            st = instantiate(st, c.id, "X");
            break;
        }
      } catch (const Error&) {
        continue;  // side condition failed; the state is unchanged
      }
      ++applied;
      INFO("sequence " << sequences << " step " << st.steps.size() << ": " << st.steps.back().text);
      CHECK_MESSAGE(stratified_now(st, &why), why << "\n" << render_program(st.current));
    }
  }
  MESSAGE("random sequences: " << sequences << ", rule applications: " << applied);
  CHECK(applied > 200);
}
