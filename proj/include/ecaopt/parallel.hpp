#pragma once

#include <cstddef>
#include <functional>

namespace ecaopt {

// Runs fn(i) for i in [0, n). With threads > 1 the index range is split
// into contiguous static chunks, one worker per chunk. Work items must
// write only to their own index slot; because the partition depends on
// nothing but (n, threads) and all reductions in this codebase happen
// afterwards in index order, results are identical for any thread count.
// Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Thread-count resolution used by the CLI: explicit value if > 0, else
// the ECAOPT_THREADS environment variable, else 1.
int resolve_threads(int requested);

}  // namespace ecaopt
