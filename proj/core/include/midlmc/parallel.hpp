#pragma once

#include <cstddef>
#include <functional>

namespace midlmc {

/// Caps the number of worker threads used by parallel_for. 0 = hardware
/// default. Results are bitwise independent of this setting: work items
/// write to index-addressed slots and reductions happen afterwards in
/// index order.
void set_max_threads(int n);
int max_threads();

/// Runs fn(i) for i in [0, n). Items must not depend on each other.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace midlmc
