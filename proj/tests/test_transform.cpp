#include "doctest.h"

#include "omegafold/frontends.hpp"
#include "omegafold/parser.hpp"
#include "omegafold/transform.hpp"
#include "omegafold/unify.hpp"
#include "support.hpp"

using namespace omegafold;

namespace {

TransformState even_odd_start() {
  auto p = parse_program(test::read_fixture("even_odd.ofp"));
  LevelMapping pins;
  parse_level_line("level odd = 1 measure 1", pins);
  parse_level_line("level even = 2", pins);
  return initial_state(p, pins);
}

TransformState lossy_fold_start() { return initial_state(parse_program(test::read_fixture("lossy_fold.ofp"))); }

std::vector<std::string> bodies(const TransformState& st, const std::string& head) {
  std::vector<std::string> out;
  for (const auto& c : st.current.clauses)
    if (c.head.pred == head) out.push_back(render(c));
  return out;
}

}  // namespace

TEST_CASE("define adds a definition clause") {
  auto st = define(lossy_fold_start(), {{"", "f :- m, not e"}});
  CHECK(st.defs.size() == 1);
  CHECK(bodies(st, "f") == std::vector<std::string>{"f :- m, not e"});
  CHECK_THROWS_AS(define(lossy_fold_start(), {{"", "newp"}}), RuleError);
}

TEST_CASE("define rejects heads already in use") {
  CHECK_THROWS_AS(define(lossy_fold_start(), {{"", "m :- e"}}), RuleError);
}

TEST_CASE("unfold: positive then negative on the counting program") {
  auto st = define(even_odd_start(), {{"", "p :- even(X), not odd(s(X))"}});
  const std::string d1 = st.defs[0];
  st = unfold_pos(st, d1, 1);
  CHECK(bodies(st, "p") ==
        std::vector<std::string>{"p :- not odd(s(0))", "p :- even(X), not odd(s(s(s(X))))"});
}

TEST_CASE("unfold: propositional definition") {
  auto st = define(lossy_fold_start(), {{"", "f :- m, not e"}});
  st = unfold_pos(st, st.defs[0], 1);
  CHECK(bodies(st, "f") == std::vector<std::string>{"f :- not e"});
  const std::string d2 = st.current.clauses.back().id;
  st = unfold_neg(st, d2, 1);
  CHECK(bodies(st, "f") == std::vector<std::string>{"f :- m, not e"});
}

TEST_CASE("unfold: no matching heads deletes the clause") {
  auto p = parse_program("pred a, b, h. a :- b. h :- b.");
  auto st = initial_state(p);
  st = define(st, {{"", "k :- h"}});
  const auto id = st.defs[0];
  st = unfold_pos(st, id, 1);
  st = unfold_pos(st, st.current.clauses.back().id, 1);
  CHECK(bodies(st, "k").empty());
}

TEST_CASE("unfold negative with no clauses drops the literal") {
  auto p = parse_program("pred a, b, c. a. c :- b.");
  auto st = initial_state(p);
  st = define(st, {{"", "h :- a, not b"}});
  st = unfold_neg(st, st.defs[0], 2);
  CHECK(bodies(st, "h") == std::vector<std::string>{"h :- a"});
}

TEST_CASE("negate_to_dnf distributes left to right") {
  auto p = parse_program("pred c1, c2, d1, d2, h. h :- c1, c2. h :- d1, d2.");
  std::vector<std::vector<Literal>> in{p.clauses[0].body, p.clauses[1].body};
  auto out = negate_to_dnf(in);
  REQUIRE(out.size() == 4);
  CHECK(render_body(out[0]) == "not c1, not d1");
  CHECK(render_body(out[1]) == "not c1, not d2");
  CHECK(render_body(out[2]) == "not c2, not d1");
  CHECK(render_body(out[3]) == "not c2, not d2");
}

TEST_CASE("negate_to_dnf edge cases") {
  auto none = negate_to_dnf({});
  REQUIRE(none.size() == 1);
  CHECK(none[0].empty());
  auto p = parse_program("pred a, h. h :- a. h :- not a.");
  CHECK(negate_to_dnf({p.clauses[0].body, p.clauses[1].body}).empty());
}

TEST_CASE("subsumption removes the more specific clause") {
  auto p = parse_program("alphabet a. pred p(ilist), q(ilist). q([a|X]). p([a|X]). p([a|Y]) :- q(Y).");
  auto st = initial_state(p);
  st = define(st, {{"", "r(X) :- p(X)"}});
  st = unfold_pos(st, st.defs[0], 1);
  auto ids = std::vector<std::string>{};
  for (const auto& c : st.current.clauses)
    if (c.head.pred == "r") ids.push_back(c.id);
  REQUIRE(ids.size() == 2);
  CHECK_THROWS_AS(subsume(st, ids[0], ids[1]), RuleError);  // by-clause has a body
  st = subsume(st, ids[1], ids[0]);
  CHECK(bodies(st, "r") == std::vector<std::string>{"r([a|X])"});
}

TEST_CASE("positive folding replaces the definition body") {
  auto st = define(even_odd_start(), {{"", "p :- even(X), not odd(s(X))"}});
  const std::string d1 = st.defs[0];
  st = unfold_pos(st, d1, 1);
  auto c = st.current.clauses;
  const std::string d2 = c[c.size() - 2].id, d3 = c.back().id;
  st = unfold_neg(st, d2, 1);
  st = unfold_neg(st, d3, 2);
  const std::string d4 = st.current.clauses.back().id;
  CHECK(render(st.current.clauses.back()) == "p :- even(X), odd(s(s(X)))");
  st = unfold_pos(st, d4, 2);
  const std::string d5 = st.current.clauses.back().id;
  CHECK(render(st.current.clauses.back()) == "p :- even(X), not odd(s(X))");
  st = fold_pos(st, d5, d1, {1, 2});
  CHECK(bodies(st, "p") == std::vector<std::string>{"p :- p"});
  CHECK(check_admissibility(st).admissible);
  auto nu = lint_condition_nu(st);
  REQUIRE(nu.size() == 1);
  CHECK(nu[0].parent_positive == 1);
  CHECK(nu[0].derived_positive == 2);
}

TEST_CASE("folding requires a matching body") {
  auto st = define(lossy_fold_start(), {{"", "f :- m, not e"}});
  CHECK_THROWS_AS(fold_pos(st, "c2", st.defs[0], {1}), RuleError);
}

TEST_CASE("negative folding with two definitions") {
  // The second h clause lifts h one level above k.
  auto p = parse_program("pred a1, a2, b, h, z. b. a2. h :- b, not a1, a2. h :- not z. z :- not a1.");
  auto st = initial_state(p);
  st = define(st, {{"", "k :- a1"}, {"", "k :- not a2"}});
  REQUIRE(st.defs.size() == 2);
  st = fold_neg(st, "c3", st.defs, {2, 3});
  CHECK(bodies(st, "h") == std::vector<std::string>{"h :- b, not k", "h :- not z"});
}

TEST_CASE("negative folding is refused when it breaks levels") {
  auto p = parse_program("pred a1, a2, b, h. b. a2. h :- b, not a1, a2.");
  auto st = initial_state(p);
  st = define(st, {{"", "k :- a1"}, {"", "k :- not a2"}});
  CHECK_THROWS_AS(fold_neg(st, "c3", st.defs, {2, 3}), RuleError);
}

TEST_CASE("negative folding with a single definition") {
  auto p = parse_program("pred a, h. h :- not a.");
  auto st = initial_state(p);
  st = define(st, {{"", "k :- a"}});
  st = fold_neg(st, "c1", st.defs, {1});
  CHECK(bodies(st, "h") == std::vector<std::string>{"h :- not k"});
}

TEST_CASE("negative folding needs complementary literals") {
  auto p = parse_program("pred a, h. h :- a.");
  auto st = initial_state(p);
  st = define(st, {{"", "k :- a"}});
  CHECK_THROWS_AS(fold_neg(st, "c1", st.defs, {1}), RuleError);
}

TEST_CASE("instantiation over the alphabet") {
  auto p = parse_program("alphabet 1, 2. pred r(ilist), s(ilist). r(X) :- s(X). s(X).");
  auto st = initial_state(p);
  st = instantiate(st, "c1", "X");
  CHECK(bodies(st, "r") == std::vector<std::string>{"r([1|X]) :- s([1|X])", "r([2|X]) :- s([2|X])"});
  auto one = initial_state(parse_program("alphabet a. pred r(ilist). r(X)."));
  CHECK(bodies(instantiate(one, "c1", "X"), "r") == std::vector<std::string>{"r([a|X])"});
  auto noilist = initial_state(parse_program("alphabet a. fun 0/0. pred r(fterm). r(X)."));
  CHECK_THROWS_AS(instantiate(noilist, "c1", "X"), RuleError);
}

TEST_CASE("admissibility: empty sequence") {
  auto st = lossy_fold_start();
  CHECK(check_admissibility(st).admissible);
  CHECK(lint_condition_nu(st).empty());
}

TEST_CASE("admissibility: the propositional fold is rejected") {
  auto st = run_script(parse_program(test::read_fixture("lossy_fold.ofp")),
                       parse_script(test::read_fixture("lossy_fold.script")));
  CHECK(bodies(st, "f") == std::vector<std::string>{"f :- f"});
  auto r = check_admissibility(st);
  CHECK_FALSE(r.admissible);
  bool cites = false;
  for (const auto& f : r.findings)
    if (!f.pass && f.condition == "2" && f.rule == "fold+") cites = true;
  CHECK(cites);
}

TEST_CASE("script: empty script leaves the program unchanged") {
  auto p = parse_program(test::read_fixture("only_a.ofp"));
  auto st = run_script(p, parse_script(""));
  CHECK(st.steps.empty());
  CHECK(render_program(st.current) == render_program(p));
}

TEST_CASE("script: failures name the step and line") {
  auto p = parse_program(test::read_fixture("lossy_fold.ofp"));
  try {
    run_script(p, parse_script("define f :- m, not e.\n\nunfold+ c4 at 2.\n"));
    FAIL("expected a script error");
  } catch (const ScriptError& e) {
    CHECK(e.step == 2);
    CHECK(e.line == 3);
  }
}

TEST_CASE("script: render and parse round-trip") {
  auto s = parse_script(test::read_fixture("buchi_two_state.script"));
  auto again = parse_script(render_script(s));
  REQUIRE(again.steps.size() == s.steps.size());
  for (std::size_t i = 0; i < s.steps.size(); ++i) CHECK(again.steps[i].rule == s.steps[i].rule);
  CHECK(again.levels.level == s.levels.level);
}

TEST_CASE("script: derivation DAG links descendants") {
  auto st = run_script(parse_program(test::read_fixture("even_odd.ofp")),
                       parse_script(test::read_fixture("even_odd.script")));
  CHECK(st.is_descendant("c10", "c5"));
  CHECK(st.is_descendant("c9", "c7"));
  CHECK_FALSE(st.is_descendant("c6", "c7"));
  CHECK(transcript(st).find("fold+") != std::string::npos);
}
