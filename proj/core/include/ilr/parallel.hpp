#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace ilr {

/// Number of worker threads used by parallel_for. Initialized from the
/// ILRFV_WORKERS environment variable (default 1).
int worker_count();
void set_worker_count(int workers);

/// Calls body(i) for i in [0, n). Work is split into contiguous chunks, one per
/// worker; each index is processed exactly once, so any per-index output is
/// independent of the worker count. The exception from the lowest chunk is
/// rethrown.
template <class Body>
void parallel_for(int n, Body&& body) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  const auto run_chunk = [&](int w) {
    const int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
    const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    try {
      for (int i = begin; i < end; ++i) body(i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  for (int w = 1; w < workers; ++w) threads.emplace_back(run_chunk, w);
  run_chunk(0);
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ilr
