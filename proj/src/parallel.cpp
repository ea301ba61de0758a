#include "simplexstab/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace simplexstab {
namespace {

int default_workers() {
  if (const char* env = std::getenv("SIMPLEXSTAB_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::atomic<int>& workers_setting() {
  static std::atomic<int> value{default_workers()};
  return value;
}

}  // namespace

int worker_count() { return workers_setting().load(); }

void set_worker_count(int workers) {
  workers_setting().store(workers > 0 ? workers : default_workers());
}

}  // namespace simplexstab
