#pragma once

#include <cstddef>
#include <functional>

namespace clgd {

// Number of worker threads used by the parallel sections (metric evaluation,
// baseline queries). Defaults to the machine's logical core count; the CLI
// overrides it via --threads / CLGD_THREADS.
int thread_count();
void set_thread_count(int n);

// Runs fn(begin, end, block_index) over fixed-size blocks of [0, count).
// Block boundaries depend only on count and block_size, never on the thread
// count, so per-block results can be reduced in block order to give
// bit-identical totals for any number of threads.
void parallel_blocks(
    std::size_t count, std::size_t block_size,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

inline std::size_t block_count(std::size_t count, std::size_t block_size) {
  return (count + block_size - 1) / block_size;
}

}  // namespace clgd
