#pragma once

#include <functional>

namespace mps {

// Number of workers used by block-parallel loops. Defaults to the hardware
// concurrency, capped by the MPSOLVE_THREADS environment variable.
int worker_count();

// Runs body(block) for block = 0..nblocks-1 across worker threads. Results
// must be written into per-block slots by the caller; block indexing is
// independent of the worker count, so merges in block order are
// deterministic.
void parallel_blocks(int nblocks, const std::function<void(int)>& body);

}  // namespace mps
