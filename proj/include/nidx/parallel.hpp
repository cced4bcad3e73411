#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nidx {

/// Worker cap: NIDX_THREADS if set, otherwise hardware concurrency.
int thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() workers. Results are
/// stored by index so the caller reduces in a fixed order.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn);

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace nidx
