#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace landau {

// Deterministic parallel map: static block partition of [0,n), each worker owns
// a contiguous index range, results land in caller-owned slots keyed by index.
// Output is identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t w = 0; w < nt; ++w) {
    const std::size_t lo = n * w / nt;
    const std::size_t hi = n * (w + 1) / nt;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace landau
