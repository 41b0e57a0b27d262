#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rcxi/lipschitz.hpp"
#include "rcxi/parallel.hpp"

using namespace rcxi;
using namespace rcxi::test;

TEST_CASE("noise-free affine maps recover L to 1e-6") {
  for (double L : {0.1, 0.3, 0.7, 0.95, 1.0, 1.3}) {
    const auto est = estimate_lipschitz(affine(5, L, 0.2), gaussian(0.0), {}, LipschitzOptions{});
    CHECK(est.l_hat == doctest::Approx(L).epsilon(1e-6));
    for (double r : est.per_probe_ratios) CHECK(r == doctest::Approx(L).epsilon(1e-6));
    CHECK(est.probes == 32);
    CHECK(est.discarded == 0);
  }
}

TEST_CASE("affine L=0.7 with noise: L_hat in [0.65, 0.75]") {
  const auto est = estimate_lipschitz(affine(8, 0.7), gaussian(0.05), {}, LipschitzOptions{});
  CHECK(est.l_hat >= 0.65);
  CHECK(est.l_hat <= 0.75);
  REQUIRE(est.onset_estimate.has_value());
  CHECK(*est.onset_estimate == 0);
}

TEST_CASE("constant map: L_hat ~ 0, onset 0") {
  const auto est = estimate_lipschitz(affine(3, 0.0, 1.0), gaussian(0.1), {}, LipschitzOptions{});
  CHECK(est.l_hat <= 0.05);
  REQUIRE(est.onset_estimate.has_value());
  CHECK(*est.onset_estimate == 0);
}

TEST_CASE("delayed contraction N=200, L0=1.1, L=0.6") {
  const auto est = estimate_lipschitz(delayed(4, 200, 1.1, 0.6, 0.5), gaussian(0.01), {}, LipschitzOptions{});
  REQUIRE(est.onset_estimate.has_value());
  CHECK(*est.onset_estimate >= 150);
  CHECK(*est.onset_estimate <= 250);
  CHECK(est.l_hat >= 0.55);
  CHECK(est.l_hat <= 0.65);
}

TEST_CASE("an expanding map never settles") {
  const auto est = estimate_lipschitz(affine(2, 1.05), gaussian(0.0), {}, LipschitzOptions{.steps = 300});
  CHECK_FALSE(est.onset_estimate.has_value());
  CHECK(est.l_hat == doctest::Approx(1.05).epsilon(1e-6));
}

TEST_CASE("rotation-contraction without a cycle contracts at rho") {
  const auto est = estimate_lipschitz(rotation(6, 0.9, 0.4), gaussian(0.0), {}, LipschitzOptions{});
  CHECK(est.l_hat == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("deterministic and independent of the thread count") {
  const LipschitzOptions o{.steps = 400, .probes = 16, .seed = 3};
  set_thread_count(1);
  const auto a = estimate_lipschitz(delayed(3, 100, 1.2, 0.5), gaussian(0.05), {}, o);
  set_thread_count(4);
  const auto b = estimate_lipschitz(delayed(3, 100, 1.2, 0.5), gaussian(0.05), {}, o);
  set_thread_count(resolve_thread_count(std::nullopt));
  CHECK(bit_equal(a.per_probe_ratios, b.per_probe_ratios));
  CHECK(a.onset_estimate == b.onset_estimate);
}

TEST_CASE("underflowing perturbations discard every probe") {
  CHECK_RCXI_ERROR(estimate_lipschitz(affine(2, 0.5), gaussian(0.0), {}, LipschitzOptions{.perturbation = 1e-320}),
                   ErrorCode::degenerate);
}

TEST_CASE("preconditions") {
  CHECK_RCXI_ERROR(estimate_lipschitz(affine(2, 0.5), gaussian(0.0), {}, LipschitzOptions{.probes = 0}),
                   ErrorCode::invalid_parameter);
  CHECK_RCXI_ERROR(estimate_lipschitz(affine(2, 0.5), gaussian(0.0), {}, LipschitzOptions{.perturbation = 0.0}),
                   ErrorCode::invalid_parameter);
  CHECK_RCXI_ERROR(estimate_lipschitz(affine(2, 0.5), gaussian(0.0), {}, LipschitzOptions{.steps = 1}),
                   ErrorCode::invalid_parameter);
  CHECK_RCXI_ERROR(estimate_lipschitz(rotation(2, 2.0, 0.1), gaussian(0.0), {}, LipschitzOptions{}),
                   ErrorCode::invalid_parameter);
}
