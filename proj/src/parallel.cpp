#include "clgd/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace clgd {
namespace {

int g_threads = 0;  // 0 = not set yet, use hardware concurrency

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int thread_count() { return g_threads > 0 ? g_threads : default_threads(); }

void set_thread_count(int n) { g_threads = n > 0 ? n : 0; }

void parallel_blocks(
    std::size_t count, std::size_t block_size,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  const std::size_t blocks = block_count(count, block_size);
  const int workers =
      static_cast<int>(std::min<std::size_t>(blocks, thread_count()));

  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * block_size;
    const std::size_t end = std::min(begin + block_size, count);
    fn(begin, end, b);
  };

  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    try {
      for (std::size_t b = next.fetch_add(1); b < blocks;
           b = next.fetch_add(1)) {
        run_block(b);
      }
    } catch (...) {
      std::scoped_lock lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace clgd
