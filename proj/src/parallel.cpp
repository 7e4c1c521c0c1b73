#include "banditkit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace banditkit {

unsigned resolve_thread_count(unsigned requested) {
  unsigned threads = requested > 0 ? requested
                                   : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BANDITKIT_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) threads = std::min(threads, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // unparsable cap: ignored
    }
  }
  return threads;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(
                             threads, static_cast<unsigned>(std::min<std::size_t>(
                                          count, 1u << 16))));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count, std::memory_order_relaxed);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace banditkit
