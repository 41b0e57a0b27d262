#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rcxi/dynamics.hpp"

namespace rcxi {

/// xi_k = ||A_{k+1} - A_k||_2 for every step of a trajectory.
struct TensionTrace {
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t burn_in = 0;
};

struct MomentBoundReport {
  double window_mean_sq = 0.0;  // windowed estimate of E[xi^2]
  double bound = 0.0;           // epsilon + eta
  bool satisfied = false;       // window_mean_sq <= bound
  std::size_t window = 0;
};

struct PersistenceReport {
  bool persistent = false;
  std::size_t longest_start = 0;
  std::size_t longest_length = 0;
  double threshold = 0.0;
  std::size_t min_run = 0;
};

struct TensionSummary {
  std::size_t count = 0;
  std::size_t burn_in = 0;
  double mean = 0.0;
  double mean_sq = 0.0;
  double min = 0.0;
  double max = 0.0;
  // Least-squares slope of xi against step after burn-in. Negative values
  // indicate tension being minimized over time.
  double trend_slope = 0.0;
};

/// Default burn-in: 10% of the trace length.
std::size_t default_burn_in(std::size_t length);

TensionTrace tension_series(std::span<const State> states);
TensionTrace tension_series(const Trajectory& trajectory);

/// Mean of xi^2 over the last `window` entries (which must lie after burn-in).
MomentBoundReport moment_bound_check(const TensionTrace& trace, double bound, std::size_t window);

/// True iff some run of >= min_run consecutive values exceeds the threshold.
/// Also reports the longest such run (strictly above threshold).
PersistenceReport persistence_check(const TensionTrace& trace, double threshold, std::size_t min_run);

TensionSummary summarize(const TensionTrace& trace);

/// Stationary E[xi^2] = 2 d sigma^2 / (1 + L) of the affine family.
double affine_stationary_mean_sq(std::size_t dim, double lipschitz, double sigma);

}  // namespace rcxi
