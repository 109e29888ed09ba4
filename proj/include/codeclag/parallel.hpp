#pragma once

#include <cstddef>
#include <functional>

namespace codeclag {

/// Runs body(i) for i in [0, count) on up to `workers` threads. Work is
/// handed out through a shared counter; the first exception thrown by any
/// body is rethrown on the calling thread after all workers finish.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

/// Worker count from the CODECLAG_PARALLELISM environment variable, or the
/// hardware concurrency when unset.
[[nodiscard]] std::size_t default_parallelism();

}  // namespace codeclag
