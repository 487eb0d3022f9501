#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "omegafold/lasso.hpp"

namespace omegafold {

// All distinct ultimately periodic words u v^w with |u| <= max_prefix and
// 1 <= |v| <= max_period, in a fixed order: by |u| + |v|, then |u|, then
// lexicographically by alphabet position. Non-canonical spellings of an
// already listed word are skipped.
std::vector<LassoWord> enumerate_lassos(const std::vector<std::string>& alphabet,
                                        std::size_t max_prefix, std::size_t max_period);

struct LassoSearch {
  std::size_t checked = 0;
  std::size_t satisfying = 0;
  std::optional<LassoWord> first;  // earliest satisfying word in enumeration order
};

using LassoPredicate = std::function<bool(const LassoWord&)>;

// Reference implementation: one word at a time.
LassoSearch search_lassos_serial(const std::vector<LassoWord>& words, const LassoPredicate& pred);

// Same result as the serial search; the predicate is evaluated on all
// words concurrently; it must be thread-safe and must not throw.
LassoSearch search_lassos_parallel(const std::vector<LassoWord>& words, const LassoPredicate& pred);

// Number of threads the parallel search uses (1 without OpenMP).
int lasso_search_threads();

}  // namespace omegafold
