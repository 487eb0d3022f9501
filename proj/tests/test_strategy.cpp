#include "doctest.h"

#include "omegafold/frontends.hpp"
#include "omegafold/oracle.hpp"
#include "omegafold/parser.hpp"
#include "omegafold/strategy.hpp"
#include "support.hpp"

using namespace omegafold;

TEST_CASE("slice keeps only reachable predicates") {
  auto p = parse_program(test::read_fixture("only_a.ofp") + "pred r(ilist). r([a|X]).");
  auto s = reachable_slice(p, "q");
  CHECK(s.clauses.size() == 2);
  CHECK(reachable_slice(p, "p").clauses.size() == 3);
}

TEST_CASE("already monadic input yields an empty script") {
  auto p = parse_program(test::read_fixture("buchi_monadic.ofp"));
  auto r = auto_derive_monadic(p, "accepting_run");
  REQUIRE(r.success);
  CHECK(r.script.steps.empty());
}

TEST_CASE("derivation for the two-state automaton") {
  auto enc = encode_buchi(parse_buchi(test::read_fixture("buchi_two_state.aut")));
  auto r = auto_derive_monadic(enc.program, enc.query);
  REQUIRE_MESSAGE(r.success, r.failure);
  REQUIRE(r.monadic);
  auto d = decide_exists(*r.monadic, enc.query);
  REQUIRE(d.exists);
  CHECK(*d.witness == LassoWord({"1"}, {"2"}));

  // The emitted script replays to an admissible sequence.
  auto st = run_script(enc.program, r.script);
  CHECK(check_admissibility(st).admissible);
  CHECK(render_program(reachable_slice(st.current, enc.query)) == render_program(r.slice));
}

TEST_CASE("derivation for a star-free containment") {
  const std::vector<std::string> ab{"a", "b"};
  auto enc = encode_containment(parse_omega_regex("(a+b)^w"), parse_omega_regex("a^w"), ab);
  auto r = auto_derive_monadic(enc.program, enc.query);
  REQUIRE_MESSAGE(r.success, r.failure);
  auto d = decide_exists(*r.monadic, enc.query);
  REQUIRE(d.exists);
  CHECK(regex_accepts(parse_omega_regex("(a+b)^w"), *d.witness, ab));
  CHECK_FALSE(regex_accepts(parse_omega_regex("a^w"), *d.witness, ab));
  CHECK(eval_monadic_lasso(*r.monadic, enc.query, *d.witness));
}

TEST_CASE("budget exhaustion reports a failure") {
  auto enc = encode_buchi(parse_buchi(test::read_fixture("buchi_two_state.aut")));
  StrategyOptions tiny;
  tiny.max_steps = 3;
  auto r = auto_derive_monadic(enc.program, enc.query, tiny);
  CHECK_FALSE(r.success);
  CHECK_FALSE(r.failure.empty());
}
