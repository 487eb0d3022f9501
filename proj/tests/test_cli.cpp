#include "doctest.h"

#include <cstdio>
#include <sstream>

#include "omegafold/cli.hpp"
#include "support.hpp"

using namespace omegafold;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                           "/omegafold_test_" + name;
  std::FILE* f = std::fopen(path.c_str(), "w");
  std::fputs(content.c_str(), f);
  std::fclose(f);
  return path;
}

const std::string FX = OMEGAFOLD_FIXTURES;

}  // namespace

TEST_CASE("cli check: levels and classification") {
  auto r = cli({"check", FX + "/only_a.ofp"});
  CHECK(r.code == exit_ok);
  CHECK(has(r.out, "stratified: level q = 0, level p = 1"));
  auto m = cli({"check", FX + "/buchi_monadic.ofp"});
  CHECK(has(m.out, "monadic: yes"));
}

TEST_CASE("cli check: error classes") {
  auto loop = cli({"check", temp_file("loop.ofp", "pred p. p :- not p.")});
  CHECK(loop.code == 2);
  CHECK(has(loop.out + loop.err, "cycle:"));
  auto bad = cli({"check", temp_file("bad.ofp", "pred p. p :- .")});
  CHECK(bad.code == 1);
}

TEST_CASE("cli transform: admissible, rejected, conflict") {
  auto ok = cli({"transform", FX + "/even_odd.ofp", "--script", FX + "/even_odd.script",
                 "--differential", "p;even(s(s(0)));odd(s(0));odd(s(s(0)))", "--depth", "16"});
  CHECK(ok.code == exit_ok);
  CHECK(has(ok.out, "clause: c10: p :- p."));
  auto rej = cli({"transform", FX + "/lossy_fold.ofp", "--script", FX + "/lossy_fold.script"});
  CHECK(rej.code == exit_inadmissible);
  auto conf = cli({"transform", FX + "/lossy_fold.ofp", "--script", FX + "/lossy_fold.script",
                   "--differential", "f", "--depth", "8"});
  CHECK(conf.code == exit_conflict);
  CHECK(has(conf.out, "CONFLICT"));
  auto empty = cli({"transform", FX + "/only_a.ofp", "--script", temp_file("empty.script", "")});
  CHECK(empty.code == exit_ok);
}

TEST_CASE("cli transform: failing step is reported") {
  auto r = cli({"transform", FX + "/lossy_fold.ofp", "--script",
                temp_file("bad.script", "define f :- m, not e.\nunfold+ c4 at 7.\n")});
  CHECK(r.code == exit_inadmissible);
  CHECK(has(r.out + r.err, "failed_step: 2"));
}

TEST_CASE("cli decide") {
  auto yes = cli({"decide", FX + "/buchi_monadic.ofp", "--pred", "accepting_run"});
  CHECK(yes.code == exit_ok);
  CHECK(has(yes.out, "witness: u=\"1\" v=\"2\""));
  auto no = cli({"decide", FX + "/regex_monadic.ofp", "--pred", "not_contained"});
  CHECK(no.code == exit_no);
  CHECK(has(no.out, "verdict: no"));
  auto enc = cli({"buchi", "encode", FX + "/buchi_two_state.aut"});
  REQUIRE(enc.code == exit_ok);
  auto raw = cli({"decide", temp_file("pa.ofp", enc.out), "--pred", "accepting_run"});
  CHECK(raw.code == exit_input);
}

TEST_CASE("cli eval") {
  CHECK(cli({"eval", FX + "/only_a.ofp", "--atom", "p((a)^w)"}).code == exit_ok);
  CHECK(cli({"eval", FX + "/only_a.ofp", "--atom", "p(a(b)^w)"}).code == exit_no);
}

TEST_CASE("cli buchi") {
  auto e = cli({"buchi", "empty", FX + "/buchi_two_state.aut"});
  CHECK(e.code == exit_ok);
  CHECK(has(e.out, "word: u=\"\" v=\"a\""));
  auto v = cli({"buchi", "verify", FX + "/buchi_two_state.aut"});
  CHECK(v.code == exit_ok);
  CHECK(has(v.out, "oracles_agree: yes"));
}

TEST_CASE("cli regex contain") {
  auto yes = cli({"regex", "contain", "a^w", "(b*a)^w", "--sigma", "a,b", "--script",
                  FX + "/regex_a_in_bstara.script", "--max-steps", "200"});
  CHECK(yes.code == exit_ok);
  CHECK(has(yes.out, "verdict: contained"));
  auto no = cli({"regex", "contain", "(a+b)^w", "a^w"});
  CHECK(no.code == exit_no);
  CHECK(has(no.out, "verdict: not contained"));
  auto fail = cli({"regex", "contain", "a^w", "(b*a)^w", "--max-steps", "50"});
  CHECK(fail.code == exit_strategy);
}

TEST_CASE("cli output is deterministic") {
  auto a = cli({"buchi", "verify", FX + "/buchi_two_state.aut"});
  auto b = cli({"buchi", "verify", FX + "/buchi_two_state.aut"});
  CHECK(a.out == b.out);
}

TEST_CASE("cli usage errors") {
  CHECK(cli({}).code == exit_input);
  CHECK(cli({"frobnicate"}).code == exit_input);
  CHECK(cli({"check", "/nonexistent/file.ofp"}).code != exit_ok);
}
