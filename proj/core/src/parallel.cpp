#include "ilr/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

namespace ilr {

namespace {

int initial_workers() {
  if (const char* env = std::getenv("ILRFV_WORKERS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (...) {
      return 1;
    }
  }
  return 1;
}

std::atomic<int>& workers() {
  static std::atomic<int> value{initial_workers()};
  return value;
}

}  // namespace

int worker_count() { return workers().load(std::memory_order_relaxed); }

void set_worker_count(int count) { workers().store(std::max(1, count), std::memory_order_relaxed); }

}  // namespace ilr
