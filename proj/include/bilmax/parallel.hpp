#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace bilmax {

// Runs fn(begin, end) over [0, n) in chunks of `grain`, one worker per
// hardware thread. Chunks write to disjoint output slots, so results do not
// depend on the thread count.
template <class Fn>
void parallel_for(std::size_t n, std::size_t grain, Fn&& fn) {
  if (n == 0) return;
  grain = std::max<std::size_t>(grain, 1);
  const std::size_t chunks = (n + grain - 1) / grain;
  const std::size_t workers =
      std::min<std::size_t>(chunks, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) {
        const std::size_t begin = c * grain;
        fn(begin, std::min(n, begin + grain));
      }
    });
  }
}

}  // namespace bilmax
