#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rcxi/dynamics.hpp"

namespace rcxi {

struct LipschitzOptions {
  std::size_t steps = 1000;
  std::size_t probes = 32;
  // Separation of the paired trajectory, relative to max(1, ||A_n||).
  double perturbation = 1e-6;
  std::size_t onset_window = 20;
  std::uint64_t seed = 0;
};

struct LipschitzEstimate {
  double l_hat = 0.0;                        // median of per-probe tail ratios
  std::optional<std::size_t> onset_estimate; // empty: contraction never settles
  std::size_t probes = 0;                    // probes used
  std::size_t discarded = 0;                 // probes whose separation underflowed
  std::vector<double> per_probe_ratios;
};

/// Probes the contraction rate of f along simulated trajectories.
///
/// Each probe runs a base trajectory and a companion displaced by a random
/// direction; both see the same noise draws. The per-step ratio
/// ||f(B_n) - f(A_n)|| / ||B_n - A_n|| is taken on noise-free f-images, and the
/// companion is re-placed at the original separation along the image
/// difference after every step, so the ratio never loses precision to
/// underflow or cancellation. A probe's tail ratio is the geometric mean over
/// the second half of the steps. The onset is the first step from which every
/// trailing window of `onset_window` cross-probe mean log-ratios is negative.
LipschitzEstimate estimate_lipschitz(const MapSpec& map_spec, const NoiseSpec& noise,
                                     const InputSchedule& inputs, const LipschitzOptions& options);

}  // namespace rcxi
