#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "rcxi/dynamics.hpp"

namespace rcxi {

struct ConvergenceOptions {
  std::size_t burn_in = 0;
  std::size_t window = 0;
  double alpha = 0.05;
  std::size_t permutations = 500;
  std::uint64_t seed = 0;
  // Each window is thinned to at most this many evenly strided states before
  // the O(m^2) test. Striding also weakens serial correlation inside a window.
  std::size_t max_points = 500;
};

struct DistConvergenceReport {
  double statistic = 0.0;  // energy distance between the two windows
  double p_value = 1.0;
  bool converged = true;   // p_value > alpha
  std::size_t window = 0;
  double alpha = 0.05;
  std::size_t permutations = 0;
  std::size_t points_per_window = 0;
};

struct TwoSampleResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Energy-distance permutation test of equal distributions for the rows of x and y.
/// p = (1 + #{permuted >= observed}) / (1 + permutations).
TwoSampleResult energy_two_sample_test(const Matrix& x, const Matrix& y, std::size_t permutations,
                                       std::uint64_t seed);

/// Compares the windows [burn_in, burn_in + window) and [end - window, end) of the states.
DistConvergenceReport convergence_test(std::span<const State> states, const ConvergenceOptions& options);
DistConvergenceReport convergence_test(const Trajectory& trajectory, const ConvergenceOptions& options);

}  // namespace rcxi
