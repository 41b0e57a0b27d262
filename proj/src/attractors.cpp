#include "rcxi/attractors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rcxi/error.hpp"
#include "rcxi/kernels.hpp"
#include "rcxi/rng.hpp"

namespace rcxi {

namespace {

Matrix strided_rows(const Matrix& points, std::size_t max_rows) {
  if (points.rows() <= max_rows) return points;
  Matrix out(max_rows, points.cols());
  for (std::size_t i = 0; i < max_rows; ++i) {
    const auto src = points.row(i * points.rows() / max_rows);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

std::vector<std::size_t> strided_labels(std::span<const std::size_t> labels, std::size_t max_rows) {
  if (labels.size() <= max_rows) return {labels.begin(), labels.end()};
  std::vector<std::size_t> out(max_rows);
  for (std::size_t i = 0; i < max_rows; ++i) out[i] = labels[i * labels.size() / max_rows];
  return out;
}

Matrix plus_plus_seeding(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  Matrix centers(k, points.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t chosen = rng.below(n);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy(points.row(chosen).begin(), points.row(chosen).end(), centers.row(c).begin());
    if (c + 1 == k) break;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points.row(i), centers.row(c)));
      total += d2[i];
    }
    if (total > 0.0) {
      double target = rng.uniform() * total;
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0 && d2[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = rng.below(n);
    }
  }
  return centers;
}

KMeansResult lloyd(const Matrix& points, Matrix centers, std::size_t max_iterations) {
  const std::size_t k = centers.rows(), d = points.cols();
  KMeansResult r;
  r.labels = kernels::parallel::assign_to_centroids(points, centers);
  for (r.iterations = 1; r.iterations <= max_iterations; ++r.iterations) {
    Matrix sums(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
      ++counts[r.labels[i]];
      auto row = sums.row(r.labels[i]);
      const auto p = points.row(i);
      for (std::size_t j = 0; j < d; ++j) row[j] += p[j];
    }
    for (std::size_t c = 0; c < k; ++c)
      if (counts[c] > 0)  // empty clusters keep their previous center
        for (std::size_t j = 0; j < d; ++j) centers(c, j) = sums(c, j) / static_cast<double>(counts[c]);
    auto labels = kernels::parallel::assign_to_centroids(points, centers);
    const bool stable = labels == r.labels;
    r.labels = std::move(labels);
    if (stable) break;
  }
  r.iterations = std::min(r.iterations, max_iterations);
  r.inertia = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i)
    r.inertia += squared_distance(points.row(i), centers.row(r.labels[i]));
  r.centroids = std::move(centers);
  return r;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t restarts,
                    std::size_t max_iterations) {
  if (points.rows() == 0) throw Error(ErrorCode::invalid_input, "points", "k-means on an empty sample");
  if (k < 1 || k > points.rows())
    throw Error(ErrorCode::invalid_parameter, "k", "k must lie in [1, number of points]");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    Rng rng(seed, streams::kmeans, k * 1024 + r);
    KMeansResult run = lloyd(points, plus_plus_seeding(points, k, rng), max_iterations);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

double silhouette_score(const Matrix& points, std::span<const std::size_t> labels, std::size_t k) {
  const auto values = kernels::parallel::silhouette_values(points, labels, k);
  double acc = 0.0;
  for (double v : values) acc += v;
  return values.empty() ? 0.0 : acc / static_cast<double>(values.size());
}

AttractorSet find_attractors(std::span<const State> tail, const AttractorOptions& o) {
  if (tail.empty()) throw Error(ErrorCode::invalid_input, "tail", "no tail states");
  if (o.k_max < 1) throw Error(ErrorCode::invalid_parameter, "k_max", "k_max must be >= 1");
  if (tail.size() < 2 * o.k_max)
    throw Error(ErrorCode::invalid_parameter, "k_max",
                "need at least 2*k_max = " + std::to_string(2 * o.k_max) + " tail states, got " +
                    std::to_string(tail.size()));
  const Matrix all = Matrix::from_rows(tail);
  const Matrix fit = strided_rows(all, std::max<std::size_t>(o.max_fit_points, 2 * o.k_max));

  std::size_t best_k = 1;
  double best_score = -std::numeric_limits<double>::infinity();
  Matrix best_centers;
  for (std::size_t k = 2; k <= o.k_max; ++k) {
    KMeansResult km = kmeans(fit, k, o.seed, o.restarts, o.max_iterations);
    const Matrix sample = strided_rows(fit, o.silhouette_sample);
    const auto sample_labels = strided_labels(km.labels, o.silhouette_sample);
    const double score = silhouette_score(sample, sample_labels, k);
    if (score > best_score) {
      best_score = score;
      best_k = k;
      best_centers = std::move(km.centroids);
    }
  }
  AttractorSet set;
  if (best_k == 1 || best_score < o.min_silhouette) {
    best_k = 1;
    best_centers = kmeans(fit, 1, o.seed, 1, o.max_iterations).centroids;
    set.silhouette = 0.0;
  } else {
    set.silhouette = best_score;
  }

  // Canonical labeling.
  std::vector<State> centroids(best_k);
  for (std::size_t c = 0; c < best_k; ++c)
    centroids[c] = State(std::vector<double>(best_centers.row(c).begin(), best_centers.row(c).end()));
  std::sort(centroids.begin(), centroids.end(),
            [](const State& a, const State& b) { return a.values < b.values; });
  const Matrix centers = Matrix::from_rows(centroids);

  const auto labels = kernels::parallel::assign_to_centroids(all, centers);
  set.k = best_k;
  set.member_indices.assign(best_k, {});
  set.dispersion.assign(best_k, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) set.member_indices[labels[i]].push_back(i);
  // Final centroids are the member means over the full tail.
  for (std::size_t c = 0; c < best_k; ++c) {
    const auto& members = set.member_indices[c];
    if (members.empty()) continue;
    State mean(all.cols());
    for (std::size_t i : members)
      for (std::size_t j = 0; j < all.cols(); ++j) mean[j] += all(i, j);
    for (double& v : mean.values) v /= static_cast<double>(members.size());
    double spread = 0.0;
    for (std::size_t i : members) spread += distance(all.row(i), mean.view());
    set.dispersion[c] = spread / static_cast<double>(members.size());
    centroids[c] = std::move(mean);
  }
  set.centroids = std::move(centroids);
  return set;
}

double dist_to_attractor(const State& state, std::span<const State> members) {
  if (members.empty()) throw Error(ErrorCode::invalid_input, "members", "empty attractor member list");
  const Matrix table = Matrix::from_rows(members);
  if (table.cols() != state.dim())
    throw Error(ErrorCode::dimension_mismatch, "state", "state and attractor dimensions differ");
  std::vector<std::uint64_t> keys(members.size());
  std::iota(keys.begin(), keys.end(), 0);
  return std::sqrt(kernels::parallel::nearest_row(state.view(), table, keys).squared_distance);
}

}  // namespace rcxi
