#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace curvmax {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

inline std::size_t chunk_count(std::size_t count, int threads) {
  if (count == 0) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), count);
}

// Runs fn(chunk_index, begin, end) over fixed index ranges. The split depends
// only on (count, threads), so per-chunk results reduced in chunk order give a
// schedule-independent outcome.
template <class Fn>
void for_each_chunk(std::size_t count, int threads, Fn&& fn) {
  const std::size_t chunks = chunk_count(count, threads);
  if (chunks == 0) return;
  if (chunks == 1) {
    fn(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  const std::size_t base = count / chunks;
  const std::size_t extra = count % chunks;
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  std::size_t begin = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t len = base + (c < extra ? 1 : 0);
    pool.emplace_back([&fn, c, begin, len] { fn(c, begin, begin + len); });
    begin += len;
  }
  for (auto& t : pool) t.join();
}

}  // namespace curvmax
