#pragma once

#include <cstddef>
#include <functional>

namespace vpfp {

// Worker count from VPFP_WORKERS (default 1). Overridable for tests.
int worker_count();
void set_worker_count(int workers);

// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are disjoint,
// so bodies writing only their own indices give results independent of the
// worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace vpfp
