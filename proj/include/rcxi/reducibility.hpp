#pragma once

#include <cstddef>

#include "rcxi/dynamics.hpp"

namespace rcxi {

/// How much of the next state is explained by the current symbol alone.
/// R^2 = 1 - SSE / SST for the best memoryless predictor phi(s) = E[A_{n+1} | s_n = s].
/// Values near 1 mean the state has collapsed to a function of the input.
struct ReducibilityReport {
  double r_squared = 0.0;
  double sse = 0.0;
  double sst = 0.0;
  std::size_t samples = 0;
  std::size_t symbols = 0;
};

ReducibilityReport symbolic_reducibility(const Trajectory& trajectory);

}  // namespace rcxi
