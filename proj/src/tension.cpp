#include "rcxi/tension.hpp"

#include <algorithm>
#include <string>

#include "rcxi/error.hpp"

namespace rcxi {

std::size_t default_burn_in(std::size_t length) { return length / 10; }

TensionTrace tension_series(std::span<const State> states) {
  if (states.size() < 2)
    throw Error(ErrorCode::invalid_input, "states", "tension needs a trajectory with at least 2 states");
  TensionTrace trace;
  trace.dim = states.front().dim();
  trace.values.resize(states.size() - 1);
  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    if (states[k + 1].dim() != trace.dim)
      throw Error(ErrorCode::dimension_mismatch, "state", "state " + std::to_string(k + 1) + " has wrong dimension");
    trace.values[k] = distance(states[k + 1].view(), states[k].view());
  }
  trace.burn_in = default_burn_in(trace.values.size());
  return trace;
}

TensionTrace tension_series(const Trajectory& trajectory) { return tension_series(trajectory.states); }

MomentBoundReport moment_bound_check(const TensionTrace& trace, double bound, std::size_t window) {
  if (trace.values.empty()) throw Error(ErrorCode::invalid_input, "trace", "empty tension trace");
  if (window == 0) throw Error(ErrorCode::invalid_parameter, "window", "window must be >= 1");
  const std::size_t available = trace.values.size() - std::min(trace.burn_in, trace.values.size());
  if (window > available)
    throw Error(ErrorCode::invalid_parameter, "window",
                "window " + std::to_string(window) + " exceeds the " + std::to_string(available) +
                    " values after burn-in");
  double acc = 0.0;
  for (std::size_t k = trace.values.size() - window; k < trace.values.size(); ++k)
    acc += trace.values[k] * trace.values[k];
  MomentBoundReport r;
  r.window_mean_sq = acc / static_cast<double>(window);
  r.bound = bound;
  r.satisfied = r.window_mean_sq <= bound;
  r.window = window;
  return r;
}

PersistenceReport persistence_check(const TensionTrace& trace, double threshold, std::size_t min_run) {
  if (trace.values.empty()) throw Error(ErrorCode::invalid_input, "trace", "empty tension trace");
  if (min_run == 0) throw Error(ErrorCode::invalid_parameter, "min_run", "min_run must be >= 1");
  PersistenceReport r;
  r.threshold = threshold;
  r.min_run = min_run;
  std::size_t start = 0, length = 0;
  for (std::size_t k = 0; k < trace.values.size(); ++k) {
    if (trace.values[k] > threshold) {
      if (length == 0) start = k;
      ++length;
      if (length > r.longest_length) {
        r.longest_length = length;
        r.longest_start = start;
      }
    } else {
      length = 0;
    }
  }
  r.persistent = r.longest_length >= min_run;
  return r;
}

TensionSummary summarize(const TensionTrace& trace) {
  TensionSummary s;
  s.count = trace.values.size();
  s.burn_in = trace.burn_in;
  if (trace.values.empty()) return s;
  s.min = *std::min_element(trace.values.begin(), trace.values.end());
  s.max = *std::max_element(trace.values.begin(), trace.values.end());
  double sum = 0.0, sum_sq = 0.0;
  for (double v : trace.values) {
    sum += v;
    sum_sq += v * v;
  }
  s.mean = sum / static_cast<double>(s.count);
  s.mean_sq = sum_sq / static_cast<double>(s.count);

  const std::size_t begin = std::min(trace.burn_in, s.count - 1);
  const double n = static_cast<double>(s.count - begin);
  if (n >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t k = begin; k < s.count; ++k) {
      mx += static_cast<double>(k);
      my += trace.values[k];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = begin; k < s.count; ++k) {
      const double dx = static_cast<double>(k) - mx;
      sxy += dx * (trace.values[k] - my);
      sxx += dx * dx;
    }
    s.trend_slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  return s;
}

double affine_stationary_mean_sq(std::size_t dim, double lipschitz, double sigma) {
  return 2.0 * static_cast<double>(dim) * sigma * sigma / (1.0 + lipschitz);
}

}  // namespace rcxi
