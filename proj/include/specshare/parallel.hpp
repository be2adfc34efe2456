#pragma once

#include <cstddef>
#include <functional>

namespace specshare {

/// Worker count: hardware concurrency, capped by SPECSHARE_THREADS.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Blocks are handed out dynamically but
/// callers index results by i, so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace specshare
