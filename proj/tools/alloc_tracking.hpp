#pragma once

#include <cstddef>

namespace stqmle::tools {

// Live and peak heap bytes seen by the replaced global operator new.
std::size_t LiveHeapBytes();
std::size_t PeakHeapBytes();
// Sets the peak to the current live size.
void ResetPeakHeap();

// VmHWM from /proc/self/status in bytes, 0 when unavailable.
std::size_t ResidentHighWater();

}  // namespace stqmle::tools
