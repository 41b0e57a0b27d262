#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "rcxi/glyph.hpp"
#include "rcxi/stats.hpp"

using namespace rcxi;
using namespace rcxi::test;

namespace {

Glyph glyph_at(State v) {
  Glyph g;
  g.vector = std::move(v);
  return g;
}

Vocab vocab_of(std::vector<std::pair<std::uint64_t, State>> entries) {
  Vocab v;
  v.dim = entries.front().second.dim();
  for (auto& [id, e] : entries) v.entries.push_back(VocabEntry{id, "t" + std::to_string(id), e});
  return v;
}

NearestSymbol exhaustive(const State& q, const Vocab& v) {
  NearestSymbol best{0, INFINITY};
  for (const auto& e : v.entries) {
    double acc = 0;
    for (std::size_t i = 0; i < q.dim(); ++i) acc += (q[i] - e.embedding[i]) * (q[i] - e.embedding[i]);
    const double d = std::sqrt(acc);
    if (d < best.distance || (d == best.distance && e.id < best.id)) best = {e.id, d};
  }
  return best;
}

}  // namespace

TEST_CASE("encode_glyph is deterministic and has the trajectory's dimension") {
  const auto t = simulate(rotation(6, 0.95, 0.5, 1.0), gaussian(0.01), {}, 1000, 2);
  const auto xi = tension_series(t);
  const auto a = encode_glyph(t, xi, 256, 0);
  const auto b = encode_glyph(t, xi, 256, 0);
  const auto c = encode_glyph(t, xi, 256, 1);
  CHECK(bit_equal(a.vector.view(), b.vector.view()));
  CHECK_FALSE(bit_equal(a.vector.view(), c.vector.view()));
  CHECK(a.vector.dim() == 6);
  CHECK(a.window == 256);
}

TEST_CASE("constant origin: glyph is column 2 of the projection over sqrt(20)") {
  // Values from tests/oracles/rng_reference.py (independent generator + transform).
  Trajectory t;
  t.dim = 2;
  t.states.assign(40, State{0.0, 0.0});
  t.inputs.assign(39, SymbolicInput{});
  const auto xi = tension_series(t);
  const auto f = glyph_features(t, xi, 16);
  REQUIRE(f.size() == 20);
  CHECK(f[2] == 1.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (i != 2) CHECK(f[i] == 0.0);

  const auto g = encode_glyph(t, xi, 16, 0);
  CHECK(g.vector[0] == doctest::Approx(-0.26911898232019316).epsilon(1e-15));
  CHECK(g.vector[1] == doctest::Approx(0.4596800351394066).epsilon(1e-15));

  // Scalar-by-scalar re-evaluation from the projection matrix.
  const Matrix p = glyph_projection(2, 20, 0);
  CHECK(g.vector[0] == doctest::Approx(p(0, 2) / std::sqrt(20.0)).epsilon(1e-15));
  CHECK(g.vector[1] == doctest::Approx(p(1, 2) / std::sqrt(20.0)).epsilon(1e-15));
}

TEST_CASE("feature layout: centroid, normalized histogram, mean and max") {
  Trajectory t;
  t.dim = 1;
  for (int k = 0; k <= 8; ++k) t.states.push_back(State{static_cast<double>(k * (k + 1) / 2)});
  t.inputs.assign(8, SymbolicInput{});
  const auto xi = tension_series(t);  // 1, 2, ..., 8
  const auto f = glyph_features(t, xi, 8);
  CHECK(f[0] == doctest::Approx((1 + 3 + 6 + 10 + 15 + 21 + 28 + 36) / 8.0));
  double mass = 0;
  for (std::size_t b = 0; b < 16; ++b) mass += f[1 + b];
  CHECK(mass == doctest::Approx(1.0));
  CHECK(f[1 + 15] == doctest::Approx(1.0 / 8));  // the maximum lands in the last bin
  CHECK(f[1 + 2] == doctest::Approx(1.0 / 8));   // 16 * 1 / 8 = 2
  CHECK(f[17] == doctest::Approx(4.5));
  CHECK(f[18] == 8.0);
}

TEST_CASE("encoder preconditions") {
  const auto t = simulate(affine(2, 0.5), gaussian(0.1), {}, 20, 0);
  const auto xi = tension_series(t);
  CHECK_RCXI_ERROR(encode_glyph(t, xi, 7, 0), ErrorCode::invalid_parameter);
  CHECK_RCXI_ERROR(encode_glyph(t, xi, 21, 0), ErrorCode::invalid_parameter);
}

TEST_CASE("nearest neighbour, tie-break and distances") {
  const auto v = vocab_of({{1, State{0.0, 0.0}}, {2, State{1.0, 0.0}}});
  const auto hit = project_symbolic(glyph_at(State{0.9, 0.0}), v);
  CHECK(hit.id == 2);
  CHECK(hit.distance == doctest::Approx(0.1));

  const auto tie = vocab_of({{9, State{-1.0, 0.0}}, {5, State{1.0, 0.0}}});
  CHECK(project_symbolic(glyph_at(State{0.0, 0.0}), tie).id == 5);
}

TEST_CASE("nearest neighbour matches an exhaustive scan on a 1000-entry vocab") {
  const auto v = synthetic_vocab(1000, 64, 3);
  Rng rng(11, streams::synthetic);
  for (int q = 0; q < 200; ++q) {
    State s(64);
    for (double& x : s.values) x = rng.normal() * (q % 2 ? 1.0 : 3.0);
    const auto got = project_symbolic(glyph_at(s), v);
    const auto want = exhaustive(s, v);
    CHECK(got.id == want.id);
    CHECK(got.distance == doctest::Approx(want.distance).epsilon(1e-12));
  }
}

TEST_CASE("vocab order does not matter beyond the id tie-break") {
  auto v = synthetic_vocab(300, 8, 5);
  auto shuffled = v;
  std::reverse(shuffled.entries.begin(), shuffled.entries.end());
  std::rotate(shuffled.entries.begin(), shuffled.entries.begin() + 77, shuffled.entries.end());
  Rng rng(2, streams::synthetic);
  for (int q = 0; q < 50; ++q) {
    State s(8);
    for (double& x : s.values) x = rng.normal();
    CHECK(project_symbolic(glyph_at(s), v).id == project_symbolic(glyph_at(s), shuffled).id);
  }
}

TEST_CASE("collapse check inequality") {
  const auto v = vocab_of({{3, State{0.0, 0.0}}});
  CHECK_FALSE(collapse_check(glyph_at(State{0.1, 0.0}), v, 0.25).anchored);
  CHECK(collapse_check(glyph_at(State{0.5, 0.0}), v, 0.25).anchored);
  CHECK(collapse_check(glyph_at(State{0.25, 0.0}), v, 0.25).anchored);
  const auto r = collapse_check(glyph_at(State{0.0, 0.5}), v, 0.25, 3);
  REQUIRE(r.input_distance.has_value());
  CHECK(*r.input_distance == 0.5);
  CHECK_FALSE(collapse_check(glyph_at(State{0.0, 0.5}), v, 0.25, 99).input_distance.has_value());
}

TEST_CASE("collapse check is monotone in delta") {
  const auto v = synthetic_vocab(1000, 16, 1);
  const auto t = simulate(rotation(16, 0.98, 0.7, 1.0), gaussian(0.01), {}, 2000, 1);
  const auto g = encode_glyph(t, tension_series(t), 256, 0);
  const double nd = project_symbolic(g, v).distance;
  bool anchored_before = true;
  for (double delta = 0.05; delta < 2 * nd; delta += nd / 50) {
    const bool a = collapse_check(g, v, delta).anchored;
    if (!anchored_before) CHECK_FALSE(a);
    CHECK(a == (nd >= delta));
    anchored_before = a;
  }
}

TEST_CASE("default delta is the 5th percentile of pairwise distances") {
  const auto v = synthetic_vocab(120, 5, 4);
  std::vector<double> pairs;
  for (std::size_t i = 0; i < v.entries.size(); ++i)
    for (std::size_t j = i + 1; j < v.entries.size(); ++j)
      pairs.push_back(distance(v.entries[i].embedding.view(), v.entries[j].embedding.view()));
  CHECK(default_delta(v) == quantile(pairs, 0.05));
}

TEST_CASE("glyphs never hit the default vocab exactly") {
  const auto v = synthetic_vocab(1000, 16, 0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto t = simulate(rotation(16, 0.98, 0.7, 1.0), gaussian(0.01), {}, 1000, seed);
    CHECK(project_symbolic(encode_glyph(t, tension_series(t), 256, 0), v).distance >= 1e-9);
  }
}

TEST_CASE("limit-cycle glyphs sit inside the vocab shell at d=64") {
  // Frozen Monte Carlo rate, matching tests/oracles/glyph_anchor_rate.py (0/100):
  // |G| ~ 1 while every N(0, I) embedding is ~sqrt(64) away and delta ~ 9.6.
  int anchored = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto v = synthetic_vocab(1000, 64, 10000 + seed);
    const auto t = simulate(rotation(64, 0.98, 0.7, 1.0), gaussian(0.01), {}, 5000, seed);
    anchored += collapse_check(encode_glyph(t, tension_series(t), 256, seed), v, default_delta(v)).anchored;
  }
  CHECK(anchored == 0);
}

TEST_CASE("vocab validation and errors") {
  auto v = synthetic_vocab(3, 2, 0);
  v.validate();
  v.entries[1].id = v.entries[0].id;
  CHECK_RCXI_ERROR(v.validate(), ErrorCode::invalid_input);
  v = synthetic_vocab(3, 2, 0);
  v.entries[2].embedding.values.push_back(1.0);
  CHECK_RCXI_ERROR(v.validate(), ErrorCode::dimension_mismatch);
  CHECK_RCXI_ERROR(project_symbolic(glyph_at(State{1.0}), Vocab{1, {}}), ErrorCode::invalid_input);
  CHECK_RCXI_ERROR(project_symbolic(glyph_at(State{1.0, 2.0, 3.0}), synthetic_vocab(3, 2, 0)),
                   ErrorCode::dimension_mismatch);
  CHECK_RCXI_ERROR(collapse_check(glyph_at(State{1.0, 2.0}), synthetic_vocab(3, 2, 0), 0.0), ErrorCode::invalid_parameter);
  CHECK_RCXI_ERROR(default_delta(synthetic_vocab(1, 2, 0)), ErrorCode::invalid_input);
}

TEST_CASE("synthetic vocab ids and text") {
  const auto v = synthetic_vocab(4, 3, 9);
  CHECK(v.dim == 3);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(v.entries[k].id == k);
    CHECK(v.entries[k].text == "tok" + std::to_string(k));
  }
  CHECK(synthetic_vocab(4, 3, 9) == v);
}
