#include "fame/parallel.hpp"

#include <omp.h>

namespace fame {

namespace {
int default_workers() {
  static const int n = omp_get_max_threads();
  return n;
}
}  // namespace

void set_worker_count(int workers) {
  const int fallback = default_workers();
  omp_set_num_threads(workers < 1 ? fallback : workers);
}

int worker_count() { return omp_get_max_threads(); }

}  // namespace fame
