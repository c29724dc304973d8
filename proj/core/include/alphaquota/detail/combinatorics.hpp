#pragma once

#include <algorithm>
#include <cstdint>

namespace alphaquota {

/// C(n, r), or cap + 1 once the value exceeds `cap`. Assumes n <= 64.
inline std::int64_t binomial(int n, int r, std::int64_t cap) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  // acc <= cap before each step and the factor is at most 64, so clamping
  // cap keeps the product inside 64 bits.
  const std::uint64_t limit = std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max<std::int64_t>(cap, 0)),
                                                      std::uint64_t{1} << 56);
  std::uint64_t acc = 1;
  for (int i = 1; i <= r; ++i) {
    acc = acc * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
    if (acc > limit) return cap + 1;
  }
  return static_cast<std::int64_t>(acc);
}

}  // namespace alphaquota
