#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace mrsurvey {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// Runs fn(i) for i in [0, count), split into contiguous blocks, one per
// thread. Results must be written to slots indexed by i so the outcome is
// independent of the thread count. fn must not let exceptions escape.
inline void parallel_for(int count, int threads,
                         const std::function<void(int)>& fn) {
  threads = resolve_threads(threads);
  if (threads > count) threads = count > 0 ? count : 1;
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    const int lo = static_cast<int>(static_cast<long long>(count) * t / threads);
    const int hi =
        static_cast<int>(static_cast<long long>(count) * (t + 1) / threads);
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mrsurvey
