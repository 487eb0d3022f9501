#include <algorithm>
#include <regex>
#include <sstream>

#include "omegafold/transform.hpp"

namespace omegafold {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  auto p = s.find('%');
  return p == std::string::npos ? s : s.substr(0, p);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

std::vector<std::size_t> parse_positions(const std::string& s, int line) {
  std::vector<std::size_t> out;
  for (const auto& p : split_list(s)) {
    if (p.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad body position '" + p + "'", line, 1);
    out.push_back(std::stoul(p));
  }
  if (out.empty()) throw ParseError("missing body positions", line, 1);
  return out;
}

// Head predicate of a clause text, used to group define lines.
std::string head_pred(const std::string& clause) {
  std::size_t i = 0;
  while (i < clause.size() && (std::isalnum(static_cast<unsigned char>(clause[i])) || clause[i] == '_'))
    ++i;
  return clause.substr(0, i);
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

Script parse_script(const std::string& text) {
  static const std::regex define_re(R"(^define\s+(?:([A-Za-z_]\w*)\s*:(?!-)\s*)?(.+)$)");
  static const std::regex defs_re(R"(^defs\s+(.+)$)");
  static const std::regex inst_re(R"(^instantiate\s+(\w+)\s+([A-Z_]\w*)$)");
  static const std::regex unfold_re(R"(^unfold([+-])\s+(\w+)\s+at\s+(\d+)$)");
  static const std::regex subsume_re(R"(^subsume\s+(\w+)\s+by\s+(\w+)$)");
  static const std::regex fold_re(R"(^fold([+-])\s+(\w+)\s+using\s+([\w\s,]+?)\s+at\s+([\d\s,]+)$)");
  Script script;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.back() == '.') line = trim(line.substr(0, line.size() - 1));
    std::smatch m;
    RuleInvocation inv;
    inv.line = lineno;
    inv.text = line;
    if (line.rfind("level ", 0) == 0) {
      try {
        parse_level_line(line, script.levels);
      } catch (const Error& e) {
        throw ParseError(e.what(), lineno, 1);
      }
      continue;
    }
    if (std::regex_match(line, m, define_re)) {
      std::string clause = trim(m[2]);
      std::string id = m[1];
      // consecutive define lines for one predicate form a single R1 step
      if (!script.steps.empty() && script.steps.back().rule == Rule::define &&
          !script.steps.back().assume &&
          head_pred(script.steps.back().definitions.front().second) == head_pred(clause)) {
        script.steps.back().definitions.emplace_back(id, clause);
        script.steps.back().text += "\n" + line;
        continue;
      }
      inv.rule = Rule::define;
      inv.definitions.emplace_back(id, clause);
    } else if (std::regex_match(line, m, defs_re)) {
      inv.rule = Rule::define;
      inv.assume = true;
      inv.using_ids = split_list(m[1]);
    } else if (std::regex_match(line, m, inst_re)) {
      inv.rule = Rule::instantiate;
      inv.clause = m[1];
      inv.variable = m[2];
    } else if (std::regex_match(line, m, unfold_re)) {
      inv.rule = m[1] == "+" ? Rule::unfold_pos : Rule::unfold_neg;
      inv.clause = m[2];
      inv.positions = {std::stoul(m[3])};
    } else if (std::regex_match(line, m, subsume_re)) {
      inv.rule = Rule::subsume;
      inv.clause = m[1];
      inv.using_ids = {m[2]};
    } else if (std::regex_match(line, m, fold_re)) {
      inv.rule = m[1] == "+" ? Rule::fold_pos : Rule::fold_neg;
      inv.clause = m[2];
      inv.using_ids = split_list(m[3]);
      inv.positions = parse_positions(m[4], lineno);
      if (inv.rule == Rule::fold_pos && inv.using_ids.size() != 1)
        throw ParseError("fold+ takes exactly one definition", lineno, 1);
    } else {
      throw ParseError("unrecognized script line: " + line, lineno, 1);
    }
    script.steps.push_back(std::move(inv));
  }
  return script;
}

std::string render_script(const Script& s) {
  std::string out;
  for (const auto& [p, l] : s.levels.level) {
    out += "level " + p + " = " + std::to_string(l);
    if (auto m = s.levels.measured.find(p); m != s.levels.measured.end())
      out += " measure " + std::to_string(m->second + 1);
    out += ".\n";
  }
  for (const auto& inv : s.steps) {
    switch (inv.rule) {
      case Rule::define:
        if (inv.assume) {
          out += "defs " + join(inv.using_ids) + ".\n";
        } else {
          for (const auto& [id, c] : inv.definitions)
            out += "define " + (id.empty() ? "" : id + ": ") + c + (c.back() == '.' ? "\n" : ".\n");
        }
        break;
      case Rule::instantiate: out += "instantiate " + inv.clause + " " + inv.variable + ".\n"; break;
      case Rule::unfold_pos:
      case Rule::unfold_neg:
        out += to_string(inv.rule) + " " + inv.clause + " at " + join(inv.positions) + ".\n";
        break;
      case Rule::subsume: out += "subsume " + inv.clause + " by " + inv.using_ids.front() + ".\n"; break;
      case Rule::fold_pos:
      case Rule::fold_neg:
        out += to_string(inv.rule) + " " + inv.clause + " using " + join(inv.using_ids) + " at " +
               join(inv.positions) + ".\n";
        break;
      case Rule::initial: break;
    }
  }
  return out;
}

TransformState apply_invocation(const TransformState& st, const RuleInvocation& inv) {
  switch (inv.rule) {
    case Rule::define:
      return inv.assume ? assume_definitions(st, inv.using_ids) : define(st, inv.definitions);
    case Rule::instantiate: return instantiate(st, inv.clause, inv.variable);
    case Rule::unfold_pos: return unfold_pos(st, inv.clause, inv.positions.at(0));
    case Rule::unfold_neg: return unfold_neg(st, inv.clause, inv.positions.at(0));
    case Rule::subsume: return subsume(st, inv.clause, inv.using_ids.at(0));
    case Rule::fold_pos: return fold_pos(st, inv.clause, inv.using_ids.at(0), inv.positions);
    case Rule::fold_neg: return fold_neg(st, inv.clause, inv.using_ids, inv.positions);
    case Rule::initial: break;
  }
  throw RuleError("script", "no rule in invocation");
}

TransformState run_script(const Program& p0, const Script& script) {
  TransformState st = initial_state(p0, script.levels);
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const auto& inv = script.steps[i];
    try {
      st = apply_invocation(st, inv);
    } catch (const RuleError& e) {
      throw ScriptError(static_cast<int>(i + 1), inv.line, e.condition, e.what());
    } catch (const Error& e) {
      throw ScriptError(static_cast<int>(i + 1), inv.line, "", e.what());
    }
  }
  return st;
}

std::string transcript(const TransformState& st) {
  std::string out = "levels:\n" + st.levels.to_string();
  for (const auto& s : st.steps) {
    std::string head = s.text;
    std::replace(head.begin(), head.end(), '\n', ' ');
    out += "step " + std::to_string(s.index) + ": " + head + "\n";
    for (const auto& c : s.removed) out += "  - " + c.id + ": " + render(c) + ".\n";
    for (const auto& c : s.added) out += "  + " + c.id + ": " + render(c) + ".\n";
  }
  out += "program:\n";
  for (const auto& c : st.current.clauses) out += "  " + c.id + ": " + render(c) + ".\n";
  return out;
}

}  // namespace omegafold
