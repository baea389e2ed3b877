#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace jmnoise {

// Worker count: explicit request > JM_THREADS env var > hardware concurrency.
int resolve_thread_count(int requested = 0);

// Fixed size of one Monte-Carlo work unit. Chunk boundaries (and hence the
// per-chunk RNG streams) depend only on the total sample count, never on the
// thread count, so estimates are bit-identical for any parallelism.
inline constexpr std::uint64_t kMcChunkSamples = 1u << 16;

struct ChunkRange {
  std::uint64_t index;  // chunk index, also the RNG stream selector
  std::uint64_t begin;
  std::uint64_t count;
};

// Runs fn(ChunkRange, Partial&) over ceil(n_total / chunk) chunks on up to
// `threads` workers. Partials are returned in chunk order; the caller
// reduces them sequentially to stay deterministic.
template <class Partial, class Fn>
std::vector<Partial> map_chunks(std::uint64_t n_total, Fn&& fn, int threads = 0,
                                std::uint64_t chunk = kMcChunkSamples) {
  const std::uint64_t n_chunks = n_total == 0 ? 0 : (n_total - 1) / chunk + 1;
  std::vector<Partial> partials(n_chunks);
  if (n_chunks == 0) return partials;

  const int worker_count =
      static_cast<int>(std::min<std::uint64_t>(resolve_thread_count(threads), n_chunks));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};

  auto work = [&]() {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= n_chunks || failed.load()) return;
      const std::uint64_t begin = i * chunk;
      const std::uint64_t count = std::min(chunk, n_total - begin);
      try {
        fn(ChunkRange{i, begin, count}, partials[i]);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };

  if (worker_count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(worker_count));
    for (int i = 0; i < worker_count; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failed.load()) std::rethrow_exception(error);
  return partials;
}

}  // namespace jmnoise
