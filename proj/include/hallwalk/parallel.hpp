#ifndef HALLWALK_PARALLEL_HPP
#define HALLWALK_PARALLEL_HPP

// Tiny index-parallel loop. Work items write only to their own slot, so
// results are identical for any thread count; the first exception is
// rethrown on the calling thread after everyone joins.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hallwalk {

template <class Fn>
void parallel_indexed(std::size_t count, unsigned threads, Fn&& per_index) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) per_index(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        per_index(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned workers =
      std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(
                                      count, 1u << 10)));
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace hallwalk

#endif
