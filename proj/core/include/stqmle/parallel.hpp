#pragma once

#include <functional>

#include "stqmle/error.hpp"

namespace stqmle {

// Number of hardware threads, at least 1.
int HardwareThreads();

// Calls fn(i) for i in [0, n) on up to `threads` workers. Work is handed out by
// index, so anything written to slot i is independent of scheduling. The
// first exception thrown by fn is rethrown after all workers have joined.
void ParallelFor(Index n, int threads, const std::function<void(Index)>& fn);

}  // namespace stqmle
