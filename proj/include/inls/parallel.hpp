#pragma once

#include <algorithm>
#include <cstdlib>
#include <cstddef>
#include <thread>
#include <vector>

namespace inls {

/// Thread cap: INLS_LAB_THREADS if set, else hardware concurrency, clamped to [1, 16].
inline unsigned max_threads() {
  if (const char* env = std::getenv("INLS_LAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 64));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return std::clamp(hw, 1u, 16u);
}

/// Runs f(i) for i in [0, n). Tasks must write to disjoint slots; reductions
/// stay with the caller so summation order is fixed regardless of thread count.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  const unsigned nt = std::min<std::size_t>(max_threads(), n);
  if (nt <= 1 || n < 4) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (unsigned t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace inls
