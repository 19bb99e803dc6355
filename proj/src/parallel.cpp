#include "banditrec/parallel.hpp"

#include <algorithm>
#include <atomic>

#include <omp.h>

namespace banditrec {
namespace {
std::atomic<int> g_workers{0};
}

void set_worker_count(int workers) { g_workers = std::max(workers, 1); }

int worker_count() {
  const int w = g_workers.load();
  return w > 0 ? w : omp_get_max_threads();
}

}  // namespace banditrec
