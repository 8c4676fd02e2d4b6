#pragma once

#include <cstddef>
#include <span>

namespace landau {

// Pairwise summation with a fixed recursion pattern. The result depends only on
// the element order, so serial and threaded runs that assemble the same array
// agree bitwise.
inline double pairwise_sum(std::span<const double> a) {
  const std::size_t n = a.size();
  if (n <= 8) {
    double s = 0;
    for (double x : a) s += x;
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(a.subspan(0, h)) + pairwise_sum(a.subspan(h));
}

}  // namespace landau
