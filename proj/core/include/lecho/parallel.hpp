#pragma once

#include <cstddef>
#include <functional>

namespace lecho {

/// Name of the environment variable that caps worker threads.
inline constexpr const char* kThreadsEnvVar = "LECHO_THREADS";

/// Worker count: LECHO_THREADS if set to a positive integer, else hardware concurrency.
[[nodiscard]] unsigned thread_count();

/// Calls body(i) for i in [0, n) across thread_count() workers. Each index is
/// visited exactly once; callers write results into preallocated slots so the
/// output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lecho
