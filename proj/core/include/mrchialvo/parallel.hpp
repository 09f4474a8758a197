#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace mrchialvo {

/// Resolves a requested thread count: 0 means "use MRCHIALVO_THREADS if set,
/// else hardware concurrency".
unsigned resolve_threads(unsigned requested);

/// Runs body(begin, end) over contiguous chunks of [0, n), each at least
/// min_chunk long. Chunk boundaries depend only on n, min_chunk and the thread
/// count; callers write to disjoint slots so results never depend on
/// scheduling.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body, std::size_t min_chunk = 1) {
  threads = resolve_threads(threads);
  const std::size_t workers = std::min<std::size_t>(threads, n / std::max<std::size_t>(min_chunk, 1));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      pool.emplace_back([&body, &errors, w, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  // First failing chunk wins, independent of timing.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace mrchialvo
