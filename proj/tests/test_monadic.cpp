#include "doctest.h"

#include "omegafold/frontends.hpp"
#include "omegafold/monadic.hpp"
#include "omegafold/oracle.hpp"
#include "omegafold/parser.hpp"
#include "support.hpp"

using namespace omegafold;

namespace {

MonadicProgram monadic(const std::string& text) {
  auto r = classify_monadic(parse_program(text));
  if (auto* rej = std::get_if<MonadicRejection>(&r)) FAIL("rejected: " << rej->reason);
  return std::get<MonadicProgram>(r);
}

}  // namespace

TEST_CASE("classify: derived Buchi program is monadic") {
  auto t = monadic(test::read_fixture("buchi_monadic.ofp"));
  CHECK(t.unary.count("accepting_run") == 1);
  CHECK(t.clauses.size() == 11);
}

TEST_CASE("classify: derived containment program is monadic") {
  auto t = monadic(test::read_fixture("regex_monadic.ofp"));
  CHECK(t.unary.count("not_contained") == 1);
}

TEST_CASE("classify: the run encoding is not monadic") {
  auto enc = encode_buchi(parse_buchi(test::read_fixture("buchi_two_state.aut")));
  auto r = classify_monadic(enc.program);
  REQUIRE(std::holds_alternative<MonadicRejection>(r));
  CHECK_FALSE(std::get<MonadicRejection>(r).reason.empty());
}

TEST_CASE("classify: head variable clauses need allow_epsilon") {
  const std::string text = test::read_fixture("only_a.ofp");
  CHECK(std::holds_alternative<MonadicRejection>(classify_monadic(parse_program(text))));
  CHECK(std::holds_alternative<MonadicProgram>(classify_monadic(parse_program(text), true)));
}

TEST_CASE("decide: accepting run of the two-state automaton") {
  auto t = monadic(test::read_fixture("buchi_monadic.ofp"));
  auto d = decide_exists(t, "accepting_run");
  REQUIRE(d.exists);
  REQUIRE(d.witness);
  CHECK(*d.witness == LassoWord({"1"}, {"2"}));
  REQUIRE(d.tableau);
  std::string why;
  CHECK_MESSAGE(verify_tableau(t, *d.tableau, "accepting_run", &why), why);
  CHECK(extract_witness(*d.tableau) == *d.witness);
  CHECK(eval_monadic_lasso(t, "accepting_run", *d.witness));
  CHECK(tableau_dot(*d.tableau).find("digraph") != std::string::npos);
}

TEST_CASE("decide: no containment counterexample") {
  auto t = monadic(test::read_fixture("regex_monadic.ofp"));
  auto d = decide_exists(t, "not_contained");
  CHECK_FALSE(d.exists);
  CHECK_FALSE(d.witness);
}

TEST_CASE("decide: a positive literal that is never discharged") {
  auto t = monadic("alphabet a. pred p(ilist). p([a|X]) :- p(X).");
  CHECK_FALSE(decide_exists(t, "p").exists);
}

TEST_CASE("decide: fact gives a one-step tableau") {
  auto t = monadic("alphabet a. pred p(ilist). p([a|X]).");
  auto d = decide_exists(t, "p");
  REQUIRE(d.exists);
  REQUIRE(d.tableau);
  CHECK(verify_tableau(t, *d.tableau, "p"));
  CHECK(*d.witness == LassoWord({}, {"a"}));
}

TEST_CASE("decide: negative loop means an infinite word avoiding b") {
  auto t = monadic(test::read_fixture("regex_monadic.ofp") +
                   "pred only_a(ilist). only_a([a|X]) :- not new3(X).");
  auto d = decide_exists(t, "only_a");
  REQUIRE(d.exists);
  CHECK(*d.witness == LassoWord({}, {"a"}));
}

TEST_CASE("verify_tableau rejects a loop through a pending positive literal") {
  auto t = monadic("alphabet a. pred p(ilist). p([a|X]) :- p(X).");
  MLiteral p{true, "p"};
  Tableau tb;
  tb.root = {p};
  TableauStep s;
  s.node = {{p}, {p}};
  s.symbol = "a";
  s.choices.push_back({p, {{"c1", 0}}});
  tb.path.push_back(s);
  tb.loop = true;
  tb.loop_target = 0;
  tb.leaf = s.node;
  std::string why;
  CHECK_FALSE(verify_tableau(t, tb, "p", &why));
  CHECK_FALSE(why.empty());
}

TEST_CASE("decide on a conjunction of literals") {
  auto t = monadic(test::read_fixture("regex_monadic.ofp"));
  // Contains b and contains a: (ba)^w or similar.
  auto d = decide_exists(t, LiteralSet{{true, "new3"}, {true, "new6"}});
  REQUIRE(d.exists);
  CHECK(eval_monadic_lasso(t, "new3", *d.witness));
  CHECK(eval_monadic_lasso(t, "new6", *d.witness));
  // new3 and not new3 is contradictory.
  CHECK_FALSE(decide_exists(t, LiteralSet{{true, "new3"}, {false, "new3"}}).exists);
}

TEST_CASE("extract_witness: trailing true leaf uses the filler") {
  Tableau tb;
  TableauStep s;
  s.symbol = "a";
  tb.path.push_back(s);
  tb.filler = "a";
  CHECK(extract_witness(tb) == LassoWord({"a"}, {"a"}));
}
