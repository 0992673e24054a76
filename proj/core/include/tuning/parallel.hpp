#pragma once

#include <cstddef>
#include <functional>

namespace tuning {

/// Environment variable capping worker threads; 0 or unset means the
/// hardware default.
inline constexpr const char* kThreadsEnvVar = "TUNE_NUM_THREADS";

/// Resolves a worker count: an explicit request wins, then TUNE_NUM_THREADS,
/// then std::thread::hardware_concurrency(). Always at least 1.
std::size_t worker_count(std::size_t requested = 0);

/// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
/// executed exactly once; if any call throws, the exception from the lowest
/// failing index is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace tuning
