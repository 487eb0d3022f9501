#include "omegafold/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "omegafold/frontends.hpp"
#include "omegafold/lasso_search.hpp"
#include "omegafold/monadic.hpp"
#include "omegafold/oracle.hpp"
#include "omegafold/parser.hpp"
#include "omegafold/strategy.hpp"
#include "omegafold/transform.hpp"

namespace omegafold {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::string witness_line(const LassoWord& w) {
  return "u=" + w.quoted_u() + " v=" + w.quoted_v();
}

// One `key: value` line per line of a multi-line block.
void block(std::ostream& out, const std::string& key, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out << key << ": " << line << "\n";
}

void print_program(std::ostream& out, const Program& p) {
  for (const auto& c : p.clauses) out << "clause: " << c.id << ": " << render(c) << ".\n";
}

// Levels in ascending order, ties in declaration order.
std::string levels_line(const Program& p, const LevelMapping& lm) {
  std::vector<std::pair<int, std::size_t>> order;
  for (std::size_t i = 0; i < p.sig.predicates.size(); ++i)
    order.emplace_back(lm.of(p.sig.predicates[i].first), i);
  std::stable_sort(order.begin(), order.end());
  std::string s;
  for (const auto& [lvl, i] : order) {
    const std::string& name = p.sig.predicates[i].first;
    s += (s.empty() ? "" : ", ") + std::string("level ") + name + " = " + std::to_string(lvl);
    if (lm.measured.count(name)) s += " measure " + std::to_string(lm.measured.at(name) + 1);
  }
  return s;
}

struct Options {
  std::string file, script, pred, dot, atom, differential, sub, f1, f2, sigma, emit_script;
  int depth = 12;
  std::size_t max_steps = StrategyOptions{}.max_steps;
  std::size_t max_defs = StrategyOptions{}.max_definitions;
  int brute = 0;
  bool show_transcript = false, show_tableau = false;
};

StrategyOptions strategy_options(const Options& o) {
  StrategyOptions s;
  s.max_steps = o.max_steps;
  s.max_definitions = o.max_defs;
  return s;
}

int cmd_check(const Options& o, std::ostream& out) {
  Program p;
  try {
    p = parse_program(slurp(o.file));
  } catch (const Error& e) {
    out << "parse: failed\nerror: " << e.what() << "\n";
    return exit_no;
  }
  out << "parse: ok\n";
  out << "clauses: " << p.clauses.size() << "\n";
  for (const auto& [name, types] : p.sig.predicates) {
    std::string t;
    for (std::size_t i = 0; i < types.size(); ++i) t += (i ? ", " : "") + to_string(types[i]);
    out << "predicate: " << name << "(" << t << ")\n";
  }
  auto inferred = infer_level_mapping(p);
  if (auto* u = std::get_if<Unstratifiable>(&inferred)) {
    std::string cyc;
    for (std::size_t i = 0; i < u->cycle.size(); ++i) cyc += (i ? " -> " : "") + u->cycle[i];
    out << "stratified: no\ncycle: " << cyc << "\nerror: " << u->message << "\n";
    return exit_input;
  }
  const auto& lm = std::get<LevelMapping>(inferred);
  out << "stratified: " << levels_line(p, lm) << "\n";
  auto m = classify_monadic(p);
  if (auto* r = std::get_if<MonadicRejection>(&m)) {
    out << "monadic: no\nmonadic_reason: " << (r->clause.empty() ? "" : r->clause + ": ") << r->reason
        << "\n";
  } else {
    out << "monadic: yes\n";
  }
  return exit_ok;
}

Program load_program(const std::string& path) {
  if (ends_with(path, ".aut")) return encode_buchi(parse_buchi(slurp(path))).program;
  return parse_program(slurp(path));
}

int cmd_transform(const Options& o, std::ostream& out) {
  Program p = load_program(o.file);
  Script s = parse_script(slurp(o.script));
  TransformState st;
  try {
    st = run_script(p, s);
  } catch (const ScriptError& e) {
    out << "applied: no\nfailed_step: " << e.step << "\nfailed_line: " << e.line
        << "\nfailed_condition: " << e.condition << "\nerror: " << e.what() << "\n";
    return exit_inadmissible;
  }
  out << "applied: yes\nsteps: " << st.steps.size() << "\n";
  if (o.show_transcript) block(out, "transcript", transcript(st));
  print_program(out, st.current);
  auto rep = check_admissibility(st);
  out << rep.to_string();
  int code = rep.admissible ? exit_ok : exit_inadmissible;
  if (!o.differential.empty()) {
    std::vector<Atom> queries;
    for (const auto& q : split(o.differential, ';'))
      queries.push_back(parse_ground_atom(st.current.sig, q));
    auto diff = differential_check(st, queries, o.depth);
    out << "depth: " << o.depth << "\n" << diff.to_string();
    if (diff.conflicts() > 0) code = exit_conflict;
  }
  return code;
}

// Monadic decision with witness and certificate output; exit 0 on yes.
int report_decision(const MonadicProgram& m, const std::string& pred, const Options& o,
                    std::ostream& out, Decision* result = nullptr) {
  Decision d = decide_exists(m, pred);
  out << "explored: " << d.explored << "\n";
  out << "verdict: " << (d.exists ? "yes" : "no") << "\n";
  if (d.exists) {
    out << "witness: " << witness_line(*d.witness) << "\n";
    if (d.tableau) {
      std::string why;
      bool ok = verify_tableau(m, *d.tableau, pred, &why);
      out << "tableau_check: " << (ok ? "ok" : "failed " + why) << "\n";
      if (o.show_tableau) block(out, "tableau", render_tableau(*d.tableau));
      if (!o.dot.empty()) write_file(o.dot, tableau_dot(*d.tableau));
    }
  }
  bool exists = d.exists;
  if (result) *result = std::move(d);
  return exists ? exit_ok : exit_no;
}

int cmd_decide(const Options& o, std::ostream& out) {
  Program p = parse_program(slurp(o.file));
  auto m = classify_monadic(p);
  if (auto* r = std::get_if<MonadicRejection>(&m)) {
    out << "monadic: no\nmonadic_reason: " << (r->clause.empty() ? "" : r->clause + ": ") << r->reason
        << "\nhint: derive a monadic program with `omegafold transform` first\n";
    return exit_input;
  }
  const auto& mp = std::get<MonadicProgram>(m);
  if (!mp.unary.count(o.pred)) {
    out << "error: " << o.pred << " is not a unary ilist predicate of the program\n";
    return exit_input;
  }
  out << "monadic: yes\n";
  return report_decision(mp, o.pred, o, out);
}

int cmd_eval(const Options& o, std::ostream& out) {
  Program p = parse_program(slurp(o.file));
  Atom a = parse_ground_atom(p.sig, o.atom);
  out << "atom: " << render(a) << "\n";
  auto m = classify_monadic(p, true);
  if (auto* mp = std::get_if<MonadicProgram>(&m); mp && a.args.size() == 1 && mp->unary.count(a.pred)) {
    bool v = eval_monadic_lasso(*mp, a.pred, a.args[0].word());
    out << "method: monadic-exact\nvalue: " << (v ? "true" : "false") << "\n";
    return v ? exit_ok : exit_no;
  }
  ThreeValued v = eval_bounded(p, a, o.depth);
  out << "method: bounded\ndepth: " << o.depth << "\nvalue: " << v.to_string() << "\n";
  return v.is_true() ? exit_ok : exit_no;
}

// Derivation used by the application pipelines: the automatic strategy,
// then the given script as fallback.
struct Derived {
  std::string method;
  TransformState state;
  Program slice;
  std::optional<MonadicProgram> monadic;
};

std::optional<Derived> derive(const Program& p, const std::string& query, const Options& o,
                              std::ostream& out) {
  auto r = auto_derive_monadic(p, query, strategy_options(o));
  out << "strategy: " << (r.success ? "ok" : "failed") << "\n";
  if (!o.emit_script.empty() && r.success) write_file(o.emit_script, render_script(r.script));
  if (r.success) {
    out << "strategy_steps: " << r.script.steps.size() << "\nstrategy_definitions: " << r.definitions
        << "\n";
    return Derived{"strategy", r.state, r.slice, r.monadic};
  }
  out << "strategy_failure: " << r.failure << "\n";
  if (o.script.empty()) {
    out << "strategy_steps: " << r.script.steps.size() << "\n";
    print_program(out, reachable_slice(r.state.current, query));
    return std::nullopt;
  }
  TransformState st = run_script(p, parse_script(slurp(o.script)));
  auto rep = check_admissibility(st);
  out << "script: " << o.script << "\nscript_steps: " << st.steps.size()
      << "\nscript_admissible: " << (rep.admissible ? "yes" : "no") << "\n";
  if (!rep.admissible) throw Error("fallback script is not admissible");
  Program slice = reachable_slice(st.current, query);
  auto m = classify_monadic(slice);
  if (auto* rej = std::get_if<MonadicRejection>(&m))
    throw Error("fallback script result is not monadic: " + rej->reason);
  return Derived{"script", st, slice, std::get<MonadicProgram>(m)};
}

int cmd_buchi(const Options& o, std::ostream& out) {
  BuchiAutomaton a = parse_buchi(slurp(o.file));
  if (o.sub == "encode") {
    Encoding e = encode_buchi(a);
    out << "query: " << e.query << "\n";
    block(out, "program", render_program(e.program));
    return exit_ok;
  }
  BuchiVerdict direct = buchi_empty_direct(a);
  if (o.sub == "empty") {
    out << "language: " << (direct.empty ? "empty" : "non-empty") << "\n";
    if (!direct.empty)
      out << "run: " << witness_line(*direct.run) << "\nword: " << witness_line(*direct.input) << "\n";
    return direct.empty ? exit_no : exit_ok;
  }
  // verify
  Encoding e = encode_buchi(a);
  auto d = derive(e.program, e.query, o, out);
  if (!d) return exit_strategy;
  out << "derivation: " << d->method << "\nmonadic: yes\n";
  Decision dec;
  report_decision(*d->monadic, e.query, o, out, &dec);
  bool agree = dec.exists == !direct.empty;
  out << "language: " << (dec.exists ? "non-empty" : "empty") << "\n";
  if (dec.exists) {
    auto word = input_for_run(a, *dec.witness);
    bool accepted = word && buchi_accepts(a, *word);
    out << "run: " << witness_line(*dec.witness) << "\n";
    if (word) out << "word: " << witness_line(*word) << "\n";
    out << "word_accepted: " << (accepted ? "yes" : "no") << "\n";
    agree = agree && accepted;
  }
  out << "direct: " << (direct.empty ? "empty" : "non-empty") << "\n";
  if (!direct.empty) out << "direct_word: " << witness_line(*direct.input) << "\n";
  out << "oracles_agree: " << (agree ? "yes" : "no") << "\n";
  if (!agree) return exit_conflict;
  return dec.exists ? exit_ok : exit_no;
}

int cmd_regex(const Options& o, std::ostream& out) {
  if (o.sub != "contain") throw Error("unknown regex subcommand " + o.sub);
  RegexPtr f1 = parse_omega_regex(o.f1), f2 = parse_omega_regex(o.f2);
  std::vector<std::string> sigma = split(o.sigma, ',');
  if (sigma.empty()) {
    std::set<std::string> s;
    for (const auto& x : regex_symbols(f1)) s.insert(x);
    for (const auto& x : regex_symbols(f2)) s.insert(x);
    sigma.assign(s.begin(), s.end());
  }
  Encoding e = encode_containment(f1, f2, sigma);
  out << "f1: " << to_string(f1) << "\nf2: " << to_string(f2) << "\n";
  auto d = derive(e.program, e.query, o, out);
  if (!d) return exit_strategy;
  out << "derivation: " << d->method << "\nmonadic: yes\n";
  Decision dec;
  report_decision(*d->monadic, e.query, o, out, &dec);
  bool contained = !dec.exists;
  bool consistent = true;
  if (dec.exists) {
    bool ok = regex_accepts(f1, *dec.witness, sigma) && !regex_accepts(f2, *dec.witness, sigma);
    out << "witness_check: " << (ok ? "ok" : "failed") << "\n";
    consistent = ok;
  }
  if (o.brute > 0) {
    BuchiAutomaton a1 = regex_automaton(f1, sigma), a2 = regex_automaton(f2, sigma);
    auto words = enumerate_lassos(sigma, static_cast<std::size_t>(o.brute),
                                  static_cast<std::size_t>(o.brute));
    auto res = search_lassos_parallel(
        words, [&](const LassoWord& w) { return buchi_accepts(a1, w) && !buchi_accepts(a2, w); });
    out << "brute_bound: " << o.brute << "\nbrute_checked: " << res.checked
        << "\nbrute_counterexamples: " << res.satisfying << "\n";
    if (res.first) out << "brute_first: " << witness_line(*res.first) << "\n";
    if (contained && res.first) consistent = false;
  }
  out << "verdict: " << (contained ? "contained" : "not contained") << "\n";
  if (!consistent) {
    out << "oracles_agree: no\n";
    return exit_conflict;
  }
  return contained ? exit_ok : exit_no;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unfold/fold transformation and decision tool for programs over infinite lists",
               "omegafold"};
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "Parse, type-check and stratify a program");
  check->add_option("file", o.file, "Program file")->required();

  auto* transform = app.add_subcommand("transform", "Replay a rule script and check admissibility");
  transform->add_option("file", o.file, "Program file (.aut files are encoded first)")->required();
  transform->add_option("--script", o.script, "Rule script")->required();
  transform->add_option("--differential", o.differential,
                        "Ground queries separated by ';' compared before and after");
  transform->add_option("--depth", o.depth, "Proof-tree depth bound")->check(CLI::PositiveNumber);
  transform->add_flag("--transcript", o.show_transcript, "Print the step-by-step program diff");

  auto* decide = app.add_subcommand("decide", "Decide whether some infinite word satisfies a predicate");
  decide->add_option("file", o.file, "Monadic program file")->required();
  decide->add_option("--pred", o.pred, "Unary predicate")->required();
  decide->add_option("--dot", o.dot, "Write the tableau as a DOT graph");
  decide->add_flag("--tableau", o.show_tableau, "Print the tableau");

  auto* eval = app.add_subcommand("eval", "Evaluate a ground atom");
  eval->add_option("file", o.file, "Program file")->required();
  eval->add_option("--atom", o.atom, "Ground atom, lists written u(v)^w")->required();
  eval->add_option("--depth", o.depth, "Proof-tree depth bound")->check(CLI::PositiveNumber);

  auto* buchi = app.add_subcommand("buchi", "Buchi automaton emptiness");
  buchi->add_option("command", o.sub, "empty | encode | verify")
      ->required()
      ->check(CLI::IsMember({"empty", "encode", "verify"}));
  buchi->add_option("file", o.file, "Automaton file")->required();
  buchi->add_option("--script", o.script, "Derivation script used when the strategy fails");
  buchi->add_option("--emit-script", o.emit_script, "Write the automatic derivation script");
  buchi->add_flag("--tableau", o.show_tableau, "Print the tableau");
  buchi->add_option("--dot", o.dot, "Write the tableau as a DOT graph");

  auto* regex = app.add_subcommand("regex", "Containment of omega-regular expressions");
  regex->add_option("command", o.sub, "contain")->required()->check(CLI::IsMember({"contain"}));
  regex->add_option("f1", o.f1, "Contained expression")->required();
  regex->add_option("f2", o.f2, "Containing expression")->required();
  regex->add_option("--sigma", o.sigma, "Alphabet, comma separated (default: symbols used)");
  regex->add_option("--script", o.script, "Derivation script used when the strategy fails");
  regex->add_option("--emit-script", o.emit_script, "Write the automatic derivation script");
  regex->add_option("--brute", o.brute, "Also search all lassos with |u|,|v| <= N")
      ->check(CLI::NonNegativeNumber);
  regex->add_flag("--tableau", o.show_tableau, "Print the tableau");
  regex->add_option("--dot", o.dot, "Write the tableau as a DOT graph");

  for (auto* sc : {buchi, regex}) {
    sc->add_option("--max-steps", o.max_steps, "Strategy rule budget")->check(CLI::PositiveNumber);
    sc->add_option("--max-defs", o.max_defs, "Strategy definition budget")->check(CLI::PositiveNumber);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (transform->parsed()) return cmd_transform(o, out);
    if (decide->parsed()) return cmd_decide(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (buchi->parsed()) return cmd_buchi(o, out);
    if (regex->parsed()) return cmd_regex(o, out);
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}

}  // namespace omegafold
