#pragma once

#include <cstddef>
#include <functional>

namespace stiga {

/// Process-wide worker count for element loops (1 = sequential).
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n). Work items are independent; results must be
/// written to per-index slots so that any later reduction happens in index
/// order, which keeps output bitwise identical across thread counts.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Sum of fn(i) accumulated strictly in index order.
double ordered_sum(std::size_t n, const std::function<double(std::size_t)>& fn);

}  // namespace stiga
