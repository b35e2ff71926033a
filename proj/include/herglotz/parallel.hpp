#pragma once

#include <cstddef>
#include <functional>

namespace herglotz {

/// Worker count used by parallel_for. 0 selects hardware concurrency.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs fn(0..n-1) over contiguous blocks, one block per worker. Each index
/// must write only its own output slot, which keeps results independent of
/// the worker count. The exception from the lowest failing block is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace herglotz
