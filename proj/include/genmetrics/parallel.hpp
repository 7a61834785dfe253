#pragma once

#include <cstddef>
#include <functional>

namespace genmetrics {

/// Worker count used when a caller does not pass one: GENMETRICS_THREADS if
/// set to a positive integer, otherwise the hardware concurrency (at least 1).
std::size_t default_thread_count();

/// Runs `body(i)` for every i in [0, items) on up to `threads` workers.
/// Items are claimed dynamically, so callers must write results by index and
/// reduce them afterwards in a fixed order. If several items throw, the
/// exception from the lowest index is rethrown.
void parallel_for(std::size_t items, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace genmetrics
