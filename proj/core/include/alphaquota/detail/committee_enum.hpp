#pragma once

#include <string>
#include <vector>

#include "alphaquota/errors.hpp"

namespace alphaquota {

template <class F>
void for_each_committee(int m, int k, std::int64_t budget, F&& f) {
  if (binomial(m, k, budget) > budget)
    throw BudgetExceeded("enumerating C(" + std::to_string(m) + ", " + std::to_string(k) +
                         ") committees exceeds budget " + std::to_string(budget));
  if (k == 0 || k > m) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    CandidateSet w;
    for (int c : idx) w.insert(c);
    if (!f(w)) return;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
  }
}

}  // namespace alphaquota
