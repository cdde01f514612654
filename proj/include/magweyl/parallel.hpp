#pragma once

#include <cstddef>
#include <functional>

namespace magweyl {

/// Worker count used by parallel kernels. Defaults to MAGWEYL_THREADS or 1.
int num_threads();
void set_num_threads(int k);

/// Calls body(begin, end) on disjoint contiguous chunks of [0, n). Every index
/// is handled exactly once and chunk boundaries do not depend on timing, so
/// any body that writes only its own indices gives thread-count independent results.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace magweyl
