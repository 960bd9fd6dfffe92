#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace minsurf {

/// Worker count: MINSURF_THREADS caps it, 0 or unset means hardware
/// concurrency.
inline unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MINSURF_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap > 0) return static_cast<unsigned>(std::min<long>(cap, 1024));
    } catch (const std::exception&) {
    }
  }
  return hw;
}

/// Calls body(i) for i in [0, n), split into contiguous blocks. body must
/// only write to state owned by index i.
template <class Body>
void parallel_for(int n, Body&& body) {
  const int workers = static_cast<int>(std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max(n, 1))));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const int begin = n * w / workers;
    const int end = n * (w + 1) / workers;
    pool.emplace_back([begin, end, &body] {
      for (int i = begin; i < end; ++i) body(i);
    });
  }
}

}  // namespace minsurf
