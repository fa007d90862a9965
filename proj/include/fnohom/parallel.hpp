#ifndef FNOHOM_PARALLEL_HPP
#define FNOHOM_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace fnohom {

/// Process-wide default worker count (0 = hardware concurrency).
inline int& default_thread_count() {
  static int n = 0;
  return n;
}

inline int resolve_threads(int requested) {
  int n = requested > 0 ? requested : default_thread_count();
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

/**
 * Run fn(begin, end) over [0, n) split into contiguous chunks, one per
 * worker. Results must not depend on the chunking: use this for pure
 * per-element maps only and keep reductions sequential.
 */
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn, int threads = 0) {
  const int workers = std::min<std::int64_t>(resolve_threads(threads), n);
  if (workers <= 1) {
    fn(std::int64_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace fnohom

#endif  // FNOHOM_PARALLEL_HPP
