#include "rcxi/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace rcxi {

void set_thread_count(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

int resolve_thread_count(std::optional<int> flag) {
  if (flag && *flag >= 1) return *flag;
  if (const char* env = std::getenv("RCXI_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

}  // namespace rcxi
