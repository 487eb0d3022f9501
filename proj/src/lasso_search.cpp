#include "omegafold/lasso_search.hpp"

#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace omegafold {

std::vector<LassoWord> enumerate_lassos(const std::vector<std::string>& alphabet,
                                        std::size_t max_prefix, std::size_t max_period) {
  std::vector<LassoWord> out;
  if (alphabet.empty() || max_period == 0) return out;
  std::set<LassoWord> seen;
  const std::size_t k = alphabet.size();
  for (std::size_t total = 1; total <= max_prefix + max_period; ++total)
    for (std::size_t nu = 0; nu <= max_prefix && nu < total; ++nu) {
      const std::size_t nv = total - nu;
      if (nv > max_period) continue;
      // Odometer over total digits: prefix digits first, then period.
      std::vector<std::size_t> digit(total, 0);
      while (true) {
        std::vector<std::string> u, v;
        for (std::size_t i = 0; i < nu; ++i) u.push_back(alphabet[digit[i]]);
        for (std::size_t i = nu; i < total; ++i) v.push_back(alphabet[digit[i]]);
        LassoWord w(u, v);
        if (seen.insert(w).second) out.push_back(std::move(w));
        std::size_t pos = total;
        while (pos > 0 && ++digit[pos - 1] == k) digit[--pos] = 0;
        if (pos == 0) break;
      }
    }
  return out;
}

LassoSearch search_lassos_serial(const std::vector<LassoWord>& words, const LassoPredicate& pred) {
  LassoSearch r;
  for (const auto& w : words) {
    ++r.checked;
    if (!pred(w)) continue;
    ++r.satisfying;
    if (!r.first) r.first = w;
  }
  return r;
}

LassoSearch search_lassos_parallel(const std::vector<LassoWord>& words, const LassoPredicate& pred) {
  const auto n = static_cast<long long>(words.size());
  std::vector<char> hit(words.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < n; ++i) hit[static_cast<std::size_t>(i)] = pred(words[static_cast<std::size_t>(i)]) ? 1 : 0;
  LassoSearch r;
  r.checked = words.size();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!hit[i]) continue;
    ++r.satisfying;
    if (!r.first) r.first = words[i];
  }
  return r;
}

int lasso_search_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace omegafold
