#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rcxi/stats.hpp"
#include "rcxi/tension.hpp"

using namespace rcxi;
using namespace rcxi::test;

namespace {

TensionTrace trace_of(std::vector<double> values, std::size_t burn_in = 0) {
  TensionTrace t;
  t.values = std::move(values);
  t.dim = 1;
  t.burn_in = burn_in;
  return t;
}

double tail_mean_sq(const TensionTrace& t) {
  double acc = 0;
  for (std::size_t k = t.burn_in; k < t.values.size(); ++k) acc += t.values[k] * t.values[k];
  return acc / static_cast<double>(t.values.size() - t.burn_in);
}

}  // namespace

TEST_CASE("constant trajectory has zero tension") {
  const std::vector<State> states(5, State{1.0, -2.0, 3.0});
  const auto t = tension_series(states);
  CHECK(t.values == std::vector<double>(4, 0.0));
  CHECK(t.dim == 3);
}

TEST_CASE("3-4-5 step") {
  const std::vector<State> states{State{0.0, 0.0}, State{3.0, 4.0}};
  CHECK(tension_series(states).values == std::vector<double>{5.0});
}

TEST_CASE("single state is rejected") {
  const std::vector<State> one{State{1.0}};
  CHECK_RCXI_ERROR(tension_series(one), ErrorCode::invalid_input);
}

TEST_CASE("length and default burn-in") {
  const auto tr = simulate(affine(3, 0.5), gaussian(0.1), {}, 250, 1);
  const auto t = tension_series(tr);
  CHECK(t.values.size() == tr.states.size() - 1);
  CHECK(t.burn_in == 25);
  for (double v : t.values) CHECK(v >= 0.0);
}

TEST_CASE("translation invariance and linear scaling") {
  const auto tr = simulate(affine(4, 0.8), gaussian(0.3), {}, 200, 2);
  auto shifted = tr.states, scaled = tr.states;
  for (auto& s : shifted)
    for (std::size_t i = 0; i < s.dim(); ++i) s[i] += 10.0 * static_cast<double>(i + 1);
  for (auto& s : scaled)
    for (double& v : s.values) v *= 2.5;
  const auto base = tension_series(tr.states);
  const auto a = tension_series(shifted);
  const auto b = tension_series(scaled);
  for (std::size_t k = 0; k < base.values.size(); ++k) {
    CHECK(a.values[k] == doctest::Approx(base.values[k]).epsilon(1e-10));
    CHECK(b.values[k] == doctest::Approx(2.5 * base.values[k]).epsilon(1e-12));
  }
}

TEST_CASE("closed-form stationary mean square") {
  CHECK(affine_stationary_mean_sq(2, 0.5, 0.1) == doctest::Approx(0.0266667).epsilon(1e-5));
  CHECK(affine_stationary_mean_sq(8, 0.7, 0.05) == doctest::Approx(0.0235294).epsilon(1e-5));
}

TEST_CASE("affine d=2, L=0.5, sigma=0.1: windowed mean xi^2 within 5% of the closed form") {
  const double expected = affine_stationary_mean_sq(2, 0.5, 0.1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = tension_series(simulate(affine(2, 0.5, 1.0), gaussian(0.1), {}, 100000, seed));
    CHECK(tail_mean_sq(t) == doctest::Approx(expected).epsilon(0.05));
    const auto r = moment_bound_check(t, 0.04, 20000);
    CHECK(r.satisfied);
    CHECK(r.window_mean_sq == doctest::Approx(expected).epsilon(0.05));
  }
}

TEST_CASE("moment bound basics") {
  const auto zero = trace_of(std::vector<double>(10, 0.0));
  const auto r = moment_bound_check(zero, 0.1, 5);
  CHECK(r.satisfied);
  CHECK(r.window_mean_sq == 0.0);
  CHECK(r.window == 5);

  const auto t = trace_of({1, 1, 2, 2});
  CHECK(moment_bound_check(t, 4.0, 2).window_mean_sq == 4.0);
  CHECK(moment_bound_check(t, 4.0, 2).satisfied);
  CHECK_FALSE(moment_bound_check(t, 3.99, 2).satisfied);
}

TEST_CASE("moment bound is monotone in the bound") {
  const auto t = tension_series(simulate(affine(3, 0.6), gaussian(0.2), {}, 2000, 4));
  bool seen = false;
  for (double b = 0.0; b < 1.0; b += 0.01) {
    const bool sat = moment_bound_check(t, b, 500).satisfied;
    if (seen) CHECK(sat);
    seen = seen || sat;
  }
  CHECK(seen);
}

TEST_CASE("moment bound preconditions") {
  CHECK_RCXI_ERROR(moment_bound_check(trace_of({}), 1.0, 1), ErrorCode::invalid_input);
  CHECK_RCXI_ERROR(moment_bound_check(trace_of({1, 2, 3}, 2), 1.0, 2), ErrorCode::invalid_parameter);
  CHECK_RCXI_ERROR(moment_bound_check(trace_of({1, 2, 3}), 1.0, 0), ErrorCode::invalid_parameter);
}

TEST_CASE("unit-root walk: bounded tension without convergence") {
  // E[xi^2] = d sigma^2 exactly when L = 1.
  const auto tr = simulate(affine(2, 1.0), gaussian(0.1), {}, 50000, 8);
  const auto t = tension_series(tr);
  CHECK(moment_bound_check(t, 1.0, 20000).window_mean_sq == doctest::Approx(0.02).epsilon(0.05));
}

TEST_CASE("persistence on hand-made traces") {
  const auto zero = persistence_check(trace_of(std::vector<double>(10, 0.0)), 0.01, 3);
  CHECK_FALSE(zero.persistent);
  CHECK(zero.longest_length == 0);

  const auto r = persistence_check(trace_of({0.2, 0.2, 0.2, 0.0}), 0.1, 3);
  CHECK(r.persistent);
  CHECK(r.longest_start == 0);
  CHECK(r.longest_length == 3);

  const auto later = persistence_check(trace_of({0.2, 0.0, 0.3, 0.3, 0.3, 0.3, 0.1}), 0.1, 5);
  CHECK_FALSE(later.persistent);
  CHECK(later.longest_start == 2);
  CHECK(later.longest_length == 4);
  // Equal to the threshold does not count as above it.
  CHECK(persistence_check(trace_of({0.1, 0.1}), 0.1, 1).longest_length == 0);
}

TEST_CASE("persistence preconditions") {
  CHECK_RCXI_ERROR(persistence_check(trace_of({}), 0.1, 3), ErrorCode::invalid_input);
  CHECK_RCXI_ERROR(persistence_check(trace_of({1.0}), 0.1, 0), ErrorCode::invalid_parameter);
}

TEST_CASE("stationary affine trace persists above its 10th percentile") {
  // P(run >= 50) depends on length: 0.906 at 5k steps, 0.99993 at 20k (tests/oracles/persistence_runs.py).
  int persistent = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto t = tension_series(simulate(affine(2, 0.5), gaussian(0.1), {}, 20000, seed));
    const std::span<const double> tail(t.values.data() + t.burn_in, t.values.size() - t.burn_in);
    persistent += persistence_check(t, quantile(tail, 0.1), 50).persistent;
  }
  CHECK(persistent >= 99);
}

TEST_CASE("summary statistics and trend") {
  auto t = trace_of({5, 4, 3, 2, 1, 0}, 2);
  const auto s = summarize(t);
  CHECK(s.count == 6);
  CHECK(s.min == 0.0);
  CHECK(s.max == 5.0);
  CHECK(s.mean == 2.5);
  CHECK(s.mean_sq == doctest::Approx(55.0 / 6));
  CHECK(s.trend_slope == doctest::Approx(-1.0));
  CHECK(summarize(trace_of({})).count == 0);
}
