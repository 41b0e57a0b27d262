#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rcxi/state.hpp"

namespace rcxi {

struct AttractorOptions {
  std::size_t k_max = 8;
  std::uint64_t seed = 0;
  double min_silhouette = 0.25;  // below this the tail is treated as one attractor
  std::size_t restarts = 4;
  std::size_t max_iterations = 100;
  std::size_t max_fit_points = 20000;
  std::size_t silhouette_sample = 2000;
};

/// Empirical attractor partition of a trajectory tail. Centroids are sorted
/// lexicographically so the labeling is canonical.
struct AttractorSet {
  std::size_t k = 1;
  std::vector<State> centroids;
  std::vector<std::vector<std::size_t>> member_indices;
  std::vector<double> dispersion;  // mean distance of members to their centroid
  double silhouette = 0.0;         // score of the selected k (0 when k = 1)
};

struct KMeansResult {
  Matrix centroids;
  std::vector<std::size_t> labels;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

/// Lloyd iteration from k-means++ seeding; the best of `restarts` runs by inertia.
KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t restarts = 4,
                    std::size_t max_iterations = 100);

double silhouette_score(const Matrix& points, std::span<const std::size_t> labels, std::size_t k);

AttractorSet find_attractors(std::span<const State> tail, const AttractorOptions& options);

/// Set distance from `state` to the empirical attractor `members`.
double dist_to_attractor(const State& state, std::span<const State> members);

}  // namespace rcxi
