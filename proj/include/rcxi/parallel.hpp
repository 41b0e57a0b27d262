#pragma once

#include <optional>

namespace rcxi {

/// Caps OpenMP parallelism for all kernels. Values < 1 are ignored.
void set_thread_count(int threads);
int thread_count();

/// `flag` if given, else RCXI_THREADS from the environment, else the OpenMP default.
int resolve_thread_count(std::optional<int> flag);

}  // namespace rcxi
