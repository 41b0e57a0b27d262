#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "rcxi/attractors.hpp"
#include "rcxi/stats.hpp"

using namespace rcxi;
using namespace rcxi::test;

namespace {

std::vector<State> pooled_two_basin_tails(std::size_t seeds, std::size_t steps) {
  std::vector<State> tail;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto t = simulate(two_basin(), gaussian(0.05), {}, steps, seed);
    tail.insert(tail.end(), t.states.begin() + static_cast<std::ptrdiff_t>(steps / 10), t.states.end());
  }
  return tail;
}

std::vector<std::set<std::size_t>> as_sets(const AttractorSet& a) {
  std::vector<std::set<std::size_t>> out;
  for (const auto& m : a.member_indices) out.emplace_back(m.begin(), m.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("two-basin map: k=2, centroids at the fixed points +-4") {
  const auto tail = pooled_two_basin_tails(20, 1000);
  const auto a = find_attractors(tail, AttractorOptions{});
  REQUIRE(a.k == 2);
  CHECK(a.centroids[0][0] == doctest::Approx(-4.0).epsilon(0.025));
  CHECK(a.centroids[1][0] == doctest::Approx(4.0).epsilon(0.025));
  CHECK(a.silhouette > 0.9);
}

TEST_CASE("single affine basin: k=1 at the fixed point") {
  const auto t = simulate(affine(8, 0.7, 0.3), gaussian(0.05), {}, 20000, 3);
  const std::span<const State> tail(t.states.data() + 2000, t.states.size() - 2000);
  const auto a = find_attractors(tail, AttractorOptions{});
  REQUIRE(a.k == 1);
  for (double v : a.centroids[0].values) CHECK(v == doctest::Approx(1.0).epsilon(0.02));
  CHECK(a.silhouette == 0.0);
}

TEST_CASE("two identical points with k_max=1") {
  const std::vector<State> tail{State{1.5, -2.0}, State{1.5, -2.0}};
  const auto a = find_attractors(tail, AttractorOptions{.k_max = 1});
  CHECK(a.k == 1);
  CHECK(a.centroids[0] == State{1.5, -2.0});
  CHECK(a.dispersion[0] == 0.0);
}

TEST_CASE("partition invariants") {
  const auto tail = pooled_two_basin_tails(3, 500);
  const auto a = find_attractors(tail, AttractorOptions{.seed = 5});
  std::vector<int> seen(tail.size(), 0);
  for (const auto& m : a.member_indices)
    for (auto i : m) ++seen[i];
  for (int c : seen) CHECK(c == 1);
  CHECK(a.centroids.size() == a.k);
  CHECK(a.dispersion.size() == a.k);
  for (const auto& c : a.centroids) CHECK(c.dim() == 1);
  CHECK(std::is_sorted(a.centroids.begin(), a.centroids.end(),
                       [](const State& x, const State& y) { return x.values < y.values; }));
}

TEST_CASE("deterministic per seed; labels compare as sets") {
  const auto tail = pooled_two_basin_tails(4, 400);
  const auto a = find_attractors(tail, AttractorOptions{.seed = 1});
  const auto b = find_attractors(tail, AttractorOptions{.seed = 1});
  const auto c = find_attractors(tail, AttractorOptions{.seed = 2});
  CHECK(bit_equal(a.centroids, b.centroids));
  CHECK(a.member_indices == b.member_indices);
  CHECK(as_sets(a) == as_sets(c));
}

TEST_CASE("three well-separated blobs") {
  Rng rng(4, streams::synthetic);
  std::vector<State> pts;
  const double centers[3][2] = {{0, 0}, {10, 0}, {0, 10}};
  for (int i = 0; i < 600; ++i) {
    const auto& c = centers[i % 3];
    pts.push_back(State{c[0] + 0.5 * rng.normal(), c[1] + 0.5 * rng.normal()});
  }
  const auto a = find_attractors(pts, AttractorOptions{});
  CHECK(a.k == 3);
  for (const auto& m : a.member_indices) CHECK(m.size() == 200);
}

TEST_CASE("k-means basics") {
  const Matrix pts = Matrix::from_rows(std::vector<State>{State{0.0}, State{0.1}, State{5.0}, State{5.2}});
  const auto r = kmeans(pts, 2, 0);
  CHECK(r.inertia == doctest::Approx(0.005 + 0.02));
  CHECK(r.labels[0] == r.labels[1]);
  CHECK(r.labels[2] == r.labels[3]);
  CHECK(r.labels[0] != r.labels[2]);
  CHECK_RCXI_ERROR(kmeans(pts, 5, 0), ErrorCode::invalid_parameter);
  CHECK_RCXI_ERROR(kmeans(Matrix(0, 1), 1, 0), ErrorCode::invalid_input);
}

TEST_CASE("silhouette of a clean split") {
  const Matrix pts = Matrix::from_rows(std::vector<State>{State{0.0}, State{1.0}, State{10.0}, State{11.0}});
  const std::vector<std::size_t> labels{0, 0, 1, 1};
  // a = 1; b = mean distance to the other pair: 10.5, 9.5, 9.5, 10.5.
  const double expected = ((10.5 - 1) / 10.5 + (9.5 - 1) / 9.5) / 2;
  CHECK(silhouette_score(pts, labels, 2) == doctest::Approx(expected));
}

TEST_CASE("find_attractors preconditions") {
  CHECK_RCXI_ERROR(find_attractors(std::vector<State>{}, AttractorOptions{}), ErrorCode::invalid_input);
  const std::vector<State> few(5, State{1.0});
  CHECK_RCXI_ERROR(find_attractors(few, AttractorOptions{.k_max = 0}), ErrorCode::invalid_parameter);
  CHECK_RCXI_ERROR(find_attractors(few, AttractorOptions{.k_max = 3}), ErrorCode::invalid_parameter);
}

TEST_CASE("dist_to_attractor") {
  const std::vector<State> members{State{4.0}};
  CHECK(dist_to_attractor(State{3.5}, members) == 0.5);
  const std::vector<State> m2{State{1.0, 1.0}, State{2.0, 0.0}};
  CHECK(dist_to_attractor(State{2.0, 0.0}, m2) == 0.0);
  CHECK(dist_to_attractor(State{2.0, 0.1}, m2) > 0.0);
  CHECK_RCXI_ERROR(dist_to_attractor(State{1.0}, std::vector<State>{}), ErrorCode::invalid_input);
  CHECK_RCXI_ERROR(dist_to_attractor(State{1.0}, m2), ErrorCode::dimension_mismatch);
}

TEST_CASE("affine run: late states sit within stationary fluctuation of the tail set") {
  // 3 sigma sqrt(d / (1 - L^2)) for d=8, L=0.7, sigma=0.05.
  const double bound = 3 * 0.05 * std::sqrt(8 / (1 - 0.49));
  const auto t = simulate(affine(8, 0.7), gaussian(0.05), {}, 20000, 6);
  const std::span<const State> members(t.states.data() + 2000, 16000);
  std::vector<double> d;
  for (std::size_t n = 18000; n < t.states.size(); n += 4) d.push_back(dist_to_attractor(t.states[n], members));
  CHECK(median(d) <= bound);
}
