#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace omegafold {

// An ultimately periodic word u v v v ... over symbol names.
// Always stored in canonical form: the period is primitive and the prefix
// is as short as rotation allows, so equal words compare equal.
class LassoWord {
 public:
  LassoWord(std::vector<std::string> prefix, std::vector<std::string> period);

  const std::vector<std::string>& prefix() const { return u_; }
  const std::vector<std::string>& period() const { return v_; }

  // Number of distinct suffixes, |u| + |v|.
  std::size_t positions() const { return u_.size() + v_.size(); }
  // Symbol at suffix index i (i < positions()).
  const std::string& at(std::size_t i) const;
  // Suffix index reached after reading the symbol at i.
  std::size_t next(std::size_t i) const;
  // Symbol at an arbitrary absolute position of the infinite word.
  const std::string& symbol(std::size_t n) const;

  LassoWord suffix(std::size_t i) const;  // word starting at suffix index i
  LassoWord tail() const { return suffix(1); }
  LassoWord prepend(const std::string& s) const;

  // "u(v)^w"; symbols are joined without separator when all are one
  // character long, otherwise separated by '.'.
  std::string to_string() const;
  std::string quoted_u() const;
  std::string quoted_v() const;

  friend bool operator==(const LassoWord&, const LassoWord&) = default;
  friend auto operator<=>(const LassoWord&, const LassoWord&) = default;

 private:
  std::vector<std::string> u_;
  std::vector<std::string> v_;
};

// Splits a run of symbols into alphabet names, longest match first.
// Accepts '.' and blanks as explicit separators. Throws on leftovers.
std::vector<std::string> split_symbols(const std::string& text,
                                       const std::vector<std::string>& alphabet);

// Parses "u(v)^w" (u may be empty).
LassoWord parse_lasso(const std::string& text, const std::vector<std::string>& alphabet);

}  // namespace omegafold
