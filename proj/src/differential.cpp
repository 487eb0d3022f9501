#include "omegafold/oracle.hpp"
#include "omegafold/transform.hpp"

namespace omegafold {

std::size_t DifferentialReport::conflicts() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.conflict();
  return n;
}

std::size_t DifferentialReport::unknowns() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += !e.before.definite() || !e.after.definite();
  return n;
}

std::string DifferentialReport::to_string() const {
  std::string out;
  for (const auto& e : entries)
    out += "differential: query=" + render(e.query) + " before=" + e.before.to_string() +
           " after=" + e.after.to_string() + (e.conflict() ? " CONFLICT" : "") + "\n";
  out += "conflicts: " + std::to_string(conflicts()) + "\n";
  out += "unknowns: " + std::to_string(unknowns()) + "\n";
  return out;
}

DifferentialReport differential_check(const TransformState& st, const std::vector<Atom>& queries,
                                      int depth) {
  DifferentialReport rep;
  const Program before = st.p0_with_defs();
  for (const auto& q : queries)
    rep.entries.push_back({q, eval_bounded(before, q, depth), eval_bounded(st.current, q, depth)});
  return rep;
}

}  // namespace omegafold
