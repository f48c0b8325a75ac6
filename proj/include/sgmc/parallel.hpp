#pragma once

// Work-sharing over an index range. Each index must be independent; callers
// keep determinism by writing results into per-index (or per-batch) slots and
// reducing in index order afterwards.

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace sgmc {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

inline void parallel_for(std::uint64_t count, int workers,
                         const std::function<void(std::uint64_t)>& fn,
                         std::uint64_t chunk = 16) {
  workers = resolve_workers(workers);
  if (workers == 1 || count < 2 * chunk) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::uint64_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      const std::uint64_t end = std::min(begin + chunk, count);
      for (std::uint64_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace sgmc
