#include "doctest.h"

#include "omegafold/frontends.hpp"
#include "omegafold/lasso_search.hpp"
#include "support.hpp"

using namespace omegafold;

namespace {

std::size_t count_pred(const Program& p, const std::string& pred) {
  std::size_t n = 0;
  for (const auto& c : p.clauses) n += c.head.pred == pred;
  return n;
}

}  // namespace

TEST_CASE("automaton file format") {
  auto a = parse_buchi(test::read_fixture("buchi_two_state.aut"));
  CHECK(a.states == std::vector<std::string>{"1", "2"});
  CHECK(a.initial == "1");
  CHECK(a.finals == std::vector<std::string>{"2"});
  CHECK(a.transitions.size() == 4);
  auto again = parse_buchi(render_buchi(a));
  CHECK(again.transitions == a.transitions);
  CHECK_THROWS_AS(parse_buchi("states 1. initial 3. sigma a."), Error);
}

TEST_CASE("run encoding: facts per automaton part") {
  auto a = parse_buchi(test::read_fixture("buchi_two_state.aut"));
  auto enc = encode_buchi(a);
  CHECK(enc.query == "accepting_run");
  CHECK(count_pred(enc.program, "tr") == 4);
  CHECK(count_pred(enc.program, "final") == 1);
  CHECK(count_pred(enc.program, "initial") == 1);

  auto none = a;
  none.finals.clear();
  auto e2 = encode_buchi(none);
  CHECK(count_pred(e2.program, "final") == 0);
  CHECK(e2.program.clauses.size() + 1 == enc.program.clauses.size());
}

TEST_CASE("direct emptiness") {
  auto a = parse_buchi(test::read_fixture("buchi_two_state.aut"));
  auto v = buchi_empty_direct(a);
  REQUIRE_FALSE(v.empty);
  CHECK(*v.run == LassoWord({"1"}, {"2"}));
  CHECK(*v.input == LassoWord({}, {"a"}));
  CHECK(buchi_accepts(a, *v.input));

  auto unreachable = parse_buchi("states 1,2. initial 1. final 2. sigma a. trans 1 a 1. trans 2 a 2.");
  CHECK(buchi_empty_direct(unreachable).empty);
  auto acyclic = parse_buchi("states 1,2. initial 1. final 2. sigma a. trans 1 a 2.");
  CHECK(buchi_empty_direct(acyclic).empty);
  // Brute force agrees: no lasso up to |Q| is accepted.
  for (const auto& w : enumerate_lassos({"a"}, 2, 2)) CHECK_FALSE(buchi_accepts(acyclic, w));
}

TEST_CASE("input letters along a run") {
  auto a = parse_buchi(test::read_fixture("buchi_two_state.aut"));
  CHECK(input_for_run(a, LassoWord({"1"}, {"2"})) == LassoWord({}, {"a"}));
  CHECK_FALSE(input_for_run(a, LassoWord({}, {"2", "1"})));
}

TEST_CASE("omega regex parsing") {
  auto a = parse_omega_regex("a^w");
  CHECK(a->kind == Regex::Kind::omega);
  auto b = parse_omega_regex("(b*a)^w");
  REQUIRE(b->kind == Regex::Kind::omega);
  CHECK(b->kids[0]->kind == Regex::Kind::cat);
  CHECK(to_string(parse_omega_regex(to_string(b))) == to_string(b));
  CHECK_THROWS_AS(parse_omega_regex("(a^w)^w"), Error);
  CHECK_THROWS_AS(parse_omega_regex("ab"), Error);
  CHECK(regex_symbols(parse_omega_regex("(a+b)*b(a+b)^w")) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("omega regex membership") {
  const std::vector<std::string> ab{"a", "b"};
  auto f = parse_omega_regex("(b*a)^w");
  CHECK(regex_accepts(f, LassoWord({}, {"a"}), ab));
  CHECK(regex_accepts(f, LassoWord({}, {"a", "b"}), ab));
  CHECK_FALSE(regex_accepts(f, LassoWord({}, {"b"}), ab));
  CHECK_FALSE(regex_accepts(f, LassoWord({"a"}, {"b"}), ab));
  auto g = parse_omega_regex("(a+b)*b(a+b)^w");
  CHECK(regex_accepts(g, LassoWord({"b"}, {"a"}), ab));
  CHECK_FALSE(regex_accepts(g, LassoWord({}, {"a"}), ab));
}

TEST_CASE("containment encoding") {
  const std::vector<std::string> ab{"a", "b"};
  auto enc = encode_containment(parse_omega_regex("a^w"), parse_omega_regex("(b*a)^w"), ab);
  CHECK(enc.query == "not_contained");
  CHECK(count_pred(enc.program, "not_contained") == 1);
  CHECK(count_pred(enc.program, "symb") == 2);
  CHECK(render(reify_regex(parse_omega_regex("a^w"))) == "omega(a)");
}
