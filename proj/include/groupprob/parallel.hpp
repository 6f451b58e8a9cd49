#pragma once

#include <cstddef>
#include <functional>

namespace groupprob {

/// Worker count: GROUPPROB_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Splits [0, n) into contiguous chunks, one per worker, and runs
/// fn(chunk_index, begin, end) for each. Chunk count never exceeds
/// `max_chunks`. Exceptions from workers are rethrown (first chunk wins).
void parallel_chunks(std::size_t n, std::size_t max_chunks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace groupprob
