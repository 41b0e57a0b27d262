#include "rcxi/convergence.hpp"

#include <algorithm>
#include <string>

#include "rcxi/error.hpp"
#include "rcxi/kernels.hpp"

namespace rcxi {

namespace {

constexpr std::size_t kMinWindow = 10;

Matrix thinned_window(std::span<const State> states, std::size_t begin, std::size_t window,
                      std::size_t max_points) {
  const std::size_t m = std::min(window, max_points);
  Matrix out(m, states[begin].dim());
  for (std::size_t i = 0; i < m; ++i) {
    const State& s = states[begin + i * window / m];
    std::copy(s.begin(), s.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace

TwoSampleResult energy_two_sample_test(const Matrix& x, const Matrix& y, std::size_t permutations,
                                       std::uint64_t seed) {
  if (x.rows() == 0 || y.rows() == 0)
    throw Error(ErrorCode::invalid_input, "window", "two-sample test needs non-empty samples");
  if (x.cols() != y.cols())
    throw Error(ErrorCode::dimension_mismatch, "window", "samples have different dimensions");
  Matrix pooled(x.rows() + y.rows(), x.cols());
  std::copy(x.data().begin(), x.data().end(), pooled.data().begin());
  std::copy(y.data().begin(), y.data().end(), pooled.data().begin() + static_cast<std::ptrdiff_t>(x.data().size()));

  const Matrix dist = kernels::parallel::pairwise_distances(pooled);
  std::vector<unsigned char> labels(pooled.rows(), 0);
  std::fill_n(labels.begin(), x.rows(), 1);

  TwoSampleResult r;
  r.statistic = kernels::energy_statistic(dist, labels);
  const auto replicas = kernels::parallel::permutation_statistics(dist, x.rows(), permutations, seed);
  std::size_t at_least = 0;
  for (double v : replicas)
    if (v >= r.statistic) ++at_least;
  r.p_value = static_cast<double>(1 + at_least) / static_cast<double>(1 + permutations);
  return r;
}

DistConvergenceReport convergence_test(std::span<const State> states, const ConvergenceOptions& o) {
  if (!(o.alpha > 0.0 && o.alpha < 1.0))
    throw Error(ErrorCode::invalid_parameter, "alpha", "alpha must lie in (0, 1)");
  if (o.window < kMinWindow)
    throw Error(ErrorCode::invalid_parameter, "window",
                "window must be >= " + std::to_string(kMinWindow) + " states");
  if (o.permutations < 1) throw Error(ErrorCode::invalid_parameter, "permutations", "permutations must be >= 1");
  if (o.max_points < kMinWindow)
    throw Error(ErrorCode::invalid_parameter, "max_points", "max_points must be >= 10");
  if (o.burn_in + 2 * o.window > states.size())
    throw Error(ErrorCode::invalid_parameter, "window",
                "windows overlap: burn_in + 2*window = " + std::to_string(o.burn_in + 2 * o.window) +
                    " exceeds " + std::to_string(states.size()) + " states");

  const Matrix early = thinned_window(states, o.burn_in, o.window, o.max_points);
  const Matrix late = thinned_window(states, states.size() - o.window, o.window, o.max_points);
  const TwoSampleResult t = energy_two_sample_test(early, late, o.permutations, o.seed);

  DistConvergenceReport r;
  r.statistic = t.statistic;
  r.p_value = t.p_value;
  r.converged = r.p_value > o.alpha;
  r.window = o.window;
  r.alpha = o.alpha;
  r.permutations = o.permutations;
  r.points_per_window = early.rows();
  return r;
}

DistConvergenceReport convergence_test(const Trajectory& trajectory, const ConvergenceOptions& options) {
  return convergence_test(std::span<const State>(trajectory.states), options);
}

}  // namespace rcxi
