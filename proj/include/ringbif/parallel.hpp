#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace ringbif {

/// Worker count from RINGBIF_THREADS, else hardware concurrency (at least 1).
[[nodiscard]] int default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// Generator for work item `index` under a run seed; independent of which
/// worker picks the item up.
[[nodiscard]] std::mt19937_64 indexed_generator(std::uint64_t seed, std::uint64_t index);

}  // namespace ringbif
