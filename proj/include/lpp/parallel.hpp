#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lpp {

/// Replicates per work item. Fixed so that partial results, and therefore the
/// reduction tree, do not depend on the number of workers.
inline constexpr std::uint64_t kReplicateChunk = 2048;

/// Worker count to use when the caller passes 0.
inline unsigned resolve_workers(unsigned requested) noexcept {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(index, acc) for index in [0, count) and merges the per-chunk
/// accumulators pairwise in chunk order. The result is a deterministic
/// function of `count` and `body`, whatever `workers` is. `Acc` needs a
/// default constructor and merge(const Acc&).
template <class Acc, class Body>
Acc reduce_replicates(std::uint64_t count, unsigned workers, Body&& body) {
  const std::uint64_t chunks = (count + kReplicateChunk - 1) / kReplicateChunk;
  if (chunks == 0) return Acc{};
  std::vector<Acc> partial(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      try {
        Acc acc;
        const std::uint64_t end = std::min(count, (c + 1) * kReplicateChunk);
        for (std::uint64_t i = c * kReplicateChunk; i < end; ++i) body(i, acc);
        partial[c] = std::move(acc);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };

  const auto threads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::uint64_t width = 1; width < chunks; width *= 2) {
    for (std::uint64_t i = 0; i + width < chunks; i += 2 * width) partial[i].merge(partial[i + width]);
  }
  return std::move(partial[0]);
}

}  // namespace lpp
