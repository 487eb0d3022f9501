#include "omegafold/lasso.hpp"

#include <algorithm>

#include "omegafold/error.hpp"

namespace omegafold {

namespace {

std::vector<std::string> primitive_root(const std::vector<std::string>& v) {
  const std::size_t n = v.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = v[i] == v[i - p];
    if (ok) return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(p)};
  }
  return v;
}

std::string join(const std::vector<std::string>& xs, bool compact) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && !compact) out += '.';
    out += xs[i];
  }
  return out;
}

}  // namespace

LassoWord::LassoWord(std::vector<std::string> prefix, std::vector<std::string> period)
    : u_(std::move(prefix)), v_(std::move(period)) {
  if (v_.empty()) throw Error("lasso word needs a non-empty period");
  v_ = primitive_root(v_);
  while (!u_.empty() && u_.back() == v_.back()) {
    u_.pop_back();
    std::rotate(v_.rbegin(), v_.rbegin() + 1, v_.rend());
  }
}

const std::string& LassoWord::at(std::size_t i) const {
  return i < u_.size() ? u_[i] : v_[i - u_.size()];
}

std::size_t LassoWord::next(std::size_t i) const {
  return i + 1 < positions() ? i + 1 : u_.size();
}

const std::string& LassoWord::symbol(std::size_t n) const {
  if (n < u_.size()) return u_[n];
  return v_[(n - u_.size()) % v_.size()];
}

LassoWord LassoWord::suffix(std::size_t i) const {
  if (i <= u_.size()) return {{u_.begin() + static_cast<std::ptrdiff_t>(i), u_.end()}, v_};
  const std::size_t k = (i - u_.size()) % v_.size();
  std::vector<std::string> rot(v_.begin() + static_cast<std::ptrdiff_t>(k), v_.end());
  rot.insert(rot.end(), v_.begin(), v_.begin() + static_cast<std::ptrdiff_t>(k));
  return {{}, rot};
}

LassoWord LassoWord::prepend(const std::string& s) const {
  std::vector<std::string> u{s};
  u.insert(u.end(), u_.begin(), u_.end());
  return {u, v_};
}

// Single-character symbols print without separators.
static bool all_single(const std::vector<std::string>& u, const std::vector<std::string>& v) {
  for (const auto& s : u) if (s.size() != 1) return false;
  for (const auto& s : v) if (s.size() != 1) return false;
  return true;
}

std::string LassoWord::to_string() const {
  const bool compact = all_single(u_, v_);
  return join(u_, compact) + "(" + join(v_, compact) + ")^w";
}

std::string LassoWord::quoted_u() const { return "\"" + join(u_, all_single(u_, v_)) + "\""; }
std::string LassoWord::quoted_v() const { return "\"" + join(v_, all_single(u_, v_)) + "\""; }

std::vector<std::string> split_symbols(const std::string& text,
                                       const std::vector<std::string>& alphabet) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '.' || text[i] == ' ' || text[i] == '\t') {
      ++i;
      continue;
    }
    std::size_t best = 0;
    const std::string* pick = nullptr;
    for (const auto& a : alphabet) {
      if (a.size() > best && text.compare(i, a.size(), a) == 0) {
        best = a.size();
        pick = &a;
      }
    }
    if (pick == nullptr)
      throw Error("unknown symbol at '" + text.substr(i) + "' (alphabet mismatch)");
    out.push_back(*pick);
    i += best;
  }
  return out;
}

LassoWord parse_lasso(const std::string& text, const std::vector<std::string>& alphabet) {
  const auto open = text.find('(');
  const auto close = text.rfind(")^w");
  if (open == std::string::npos || close == std::string::npos || close < open ||
      close + 3 != text.size())
    throw Error("malformed lasso literal '" + text + "', expected u(v)^w");
  auto u = split_symbols(text.substr(0, open), alphabet);
  auto v = split_symbols(text.substr(open + 1, close - open - 1), alphabet);
  if (v.empty()) throw Error("lasso literal '" + text + "' has an empty period");
  return {std::move(u), std::move(v)};
}

}  // namespace omegafold
