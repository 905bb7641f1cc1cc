#pragma once

#include <cstddef>
#include <functional>

namespace tfc {

// Worker count used by training and tuning when the caller passes -1.
// Reads the TFC_THREADS environment variable; defaults to all cores.
int worker_count();

// Runs fn(i) for i in [0, n). Work items are claimed from an atomic counter,
// so each item runs exactly once and writes to its own output slot; results
// are identical for any number of workers. workers <= 1 runs inline.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace tfc
