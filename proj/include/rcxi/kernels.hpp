#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference and an
// OpenMP version; the parallel versions are deterministic for any thread count.
// All of them except covariance are bit-identical to their serial reference.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rcxi/state.hpp"

namespace rcxi::kernels {

struct NearestHit {
  std::size_t index = 0;
  double squared_distance = 0.0;
};

/// Energy-distance V-statistic 2E|X-Y| - E|X-X'| - E|Y-Y'| from a pooled
/// distance matrix where rows with `in_first[i]` form X.
double energy_statistic(const Matrix& dist, std::span<const unsigned char> in_first);

namespace serial {

Matrix pairwise_distances(const Matrix& points);
/// Statistic for each of `permutations` seeded random relabelings (first n1 rows = X).
std::vector<double> permutation_statistics(const Matrix& dist, std::size_t n1,
                                           std::size_t permutations, std::uint64_t seed);
/// Unbiased sample covariance of the rows (mean-centered internally).
Matrix covariance(const Matrix& points);
std::vector<double> silhouette_values(const Matrix& points, std::span<const std::size_t> labels,
                                      std::size_t k);
/// Row of `table` nearest to `query`; ties go to the smallest `keys` entry.
NearestHit nearest_row(std::span<const double> query, const Matrix& table,
                       std::span<const std::uint64_t> keys);
std::vector<std::size_t> assign_to_centroids(const Matrix& points, const Matrix& centroids);

}  // namespace serial

namespace parallel {

Matrix pairwise_distances(const Matrix& points);
std::vector<double> permutation_statistics(const Matrix& dist, std::size_t n1,
                                           std::size_t permutations, std::uint64_t seed);
Matrix covariance(const Matrix& points);
std::vector<double> silhouette_values(const Matrix& points, std::span<const std::size_t> labels,
                                      std::size_t k);
NearestHit nearest_row(std::span<const double> query, const Matrix& table,
                       std::span<const std::uint64_t> keys);
std::vector<std::size_t> assign_to_centroids(const Matrix& points, const Matrix& centroids);

}  // namespace parallel

}  // namespace rcxi::kernels
