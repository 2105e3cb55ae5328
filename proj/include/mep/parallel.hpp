#pragma once

#include <cstddef>
#include <functional>

namespace mep {

/// Runs `body(i)` for i in [0, count) on up to `workers` threads. Each index
/// is processed exactly once; callers write results into pre-sized slots so
/// the outcome does not depend on the number of workers. The first exception
/// thrown by any worker is rethrown after all workers joined.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

/// Number of hardware threads, at least 1.
std::size_t default_workers();

}  // namespace mep
