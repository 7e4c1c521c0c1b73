#pragma once

#include <cstddef>
#include <functional>

namespace banditkit {

/// Worker count: `requested` if positive, else hardware concurrency; always
/// capped by the BANDITKIT_THREADS environment variable when it is set.
unsigned resolve_thread_count(unsigned requested = 0);

/// Calls body(i) for i in [0, count) on up to `threads` workers. Each index
/// runs exactly once; results must be written to per-index slots. The first
/// exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace banditkit
