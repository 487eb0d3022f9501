#include "doctest.h"

#include "omegafold/parser.hpp"
#include "omegafold/strata.hpp"
#include "support.hpp"

using namespace omegafold;

TEST_CASE("levels: q below p") {
  auto p = parse_program(test::read_fixture("only_a.ofp"));
  auto r = infer_level_mapping(p);
  REQUIRE(std::holds_alternative<LevelMapping>(r));
  const auto& lm = std::get<LevelMapping>(r);
  CHECK(lm.of("q") == 0);
  CHECK(lm.of("p") == 1);
  CHECK(check_stratified(p, lm).empty());
}

TEST_CASE("levels: self-negation has a cycle") {
  auto p = parse_program("pred p. p :- not p.");
  auto r = infer_level_mapping(p);
  REQUIRE(std::holds_alternative<Unstratifiable>(r));
  const auto& u = std::get<Unstratifiable>(r);
  REQUIRE(!u.cycle.empty());
  CHECK(u.cycle.front() == "p");
}

TEST_CASE("levels: propositional program with a positive loop") {
  auto p = parse_program("pred m, e. m. e :- not m. e :- e.");
  auto lm = std::get<LevelMapping>(infer_level_mapping(p));
  CHECK(lm.of("m") == 0);
  CHECK(lm.of("e") == 1);
  // Witness property: no head sits below its body.
  CHECK(check_stratified(p, lm).empty());
}

TEST_CASE("levels: measured recursion through negation") {
  auto p = parse_program(test::read_fixture("even_odd.ofp"));
  LevelMapping pins;
  parse_level_line("level odd = 1 measure 1", pins);
  auto r = infer_level_mapping(p, pins);
  REQUIRE(std::holds_alternative<LevelMapping>(r));
  CHECK(check_stratified(p, std::get<LevelMapping>(r)).empty());
  // Inference finds the measured argument by itself.
  auto inferred = infer_level_mapping(p);
  REQUIRE(std::holds_alternative<LevelMapping>(inferred));
  CHECK(std::get<LevelMapping>(inferred).measured.at("odd") == 0);
  // A negative self-loop without a shrinking argument stays unstratifiable.
  CHECK(std::holds_alternative<Unstratifiable>(
      infer_level_mapping(parse_program("fun s/1, 0/0. pred r(fterm). r(X) :- not r(s(X))."))));
}

TEST_CASE("violations: lowering p breaks stratification") {
  auto p = parse_program(test::read_fixture("only_a.ofp"));
  LevelMapping lm;
  lm.level = {{"p", 0}, {"q", 0}};
  auto v = check_stratified(p, lm);
  REQUIRE(v.size() == 1);
  CHECK(v[0].position == 1);
  CHECK(check_stratified(Program{}, lm).empty());
}

TEST_CASE("sigma-maximal atoms and tightness") {
  auto p = parse_program(
      "fun s/1, 0/0. pred even(fterm), odd(fterm), p. "
      "p :- even(X), not odd(s(X)). p.");
  LevelMapping lm;
  lm.level = {{"even", 2}, {"odd", 1}, {"p", 2}};
  lm.measured = {{"odd", 0}};
  CHECK(sigma_maximal_atoms(p.clauses[0], lm) == std::set<std::size_t>{1});
  CHECK(is_sigma_tight(p.clauses[0], lm));
  CHECK(sigma_maximal_atoms(p.clauses[1], lm).empty());
  CHECK_FALSE(is_sigma_tight(p.clauses[1], lm));
}

TEST_CASE("sigma-maximal: equal levels give every positive atom") {
  auto p = parse_program(
      "alphabet 1, 2. fun 0/0, s/1. pred occ(fterm, ilist, fterm), final(fterm), new1(ilist). "
      "new1(X) :- occ(N, X, S), final(S).");
  LevelMapping lm;
  lm.level = {{"occ", 0}, {"final", 0}, {"new1", 0}};
  CHECK(sigma_maximal_atoms(p.clauses[0], lm) == std::set<std::size_t>{1, 2});
  CHECK(is_sigma_tight(p.clauses[0], lm));
}

TEST_CASE("not sigma-tight when the head is above the body") {
  auto p = parse_program("pred m, e, f. f :- m, not e.");
  LevelMapping lm;
  lm.level = {{"m", 0}, {"e", 1}, {"f", 2}};
  CHECK(sigma_maximal_atoms(p.clauses[0], lm).empty());
  CHECK_FALSE(is_sigma_tight(p.clauses[0], lm));
}

TEST_CASE("minimal head level and level lines") {
  auto p = parse_program("pred m, e, f. f :- m, not e.");
  LevelMapping lm;
  lm.level = {{"m", 0}, {"e", 1}};
  CHECK(minimal_head_level(p.clauses, lm) == 2);
  LevelMapping parsed;
  parse_level_line("level nat = 2", parsed);
  CHECK(parsed.of("nat") == 2);
  CHECK_THROWS(parse_level_line("lvl nat 2", parsed));
}
