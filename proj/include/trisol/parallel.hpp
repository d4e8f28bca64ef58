#pragma once

#include <cstddef>
#include <functional>

namespace trisol {

/// Worker count: TRISOL_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency().
int thread_count();

/// Splits [0, n) into contiguous chunks, one per worker, and runs
/// body(chunk, begin, end) on each. Chunk boundaries depend only on n and the
/// worker count, so callers can merge per-chunk results in chunk order.
void parallel_chunks(std::size_t n, int chunks, const std::function<void(int, std::size_t, std::size_t)>& body);

}  // namespace trisol
