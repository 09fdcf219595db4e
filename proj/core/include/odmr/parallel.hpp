#pragma once

#include <cstddef>
#include <functional>

namespace odmr {

// Worker count: ODMR_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned worker_count();

// Splits [0, n) into at most `workers` contiguous chunks and runs
// body(begin, end) for each, on separate threads when workers > 1. The
// partition only decides who computes what; results written per index are
// identical for any worker count.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace odmr
