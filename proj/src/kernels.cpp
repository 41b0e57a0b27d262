#include "rcxi/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcxi/rng.hpp"

namespace rcxi::kernels {

namespace {

constexpr std::size_t kCovarianceBlock = 256;

std::vector<unsigned char> shuffled_labels(std::size_t m, std::size_t n1, std::uint64_t seed,
                                           std::size_t replicate) {
  std::vector<unsigned char> labels(m, 0);
  std::fill_n(labels.begin(), n1, 1);
  Rng rng(seed, streams::permutation, replicate);
  for (std::size_t i = m; i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(labels[i - 1], labels[j]);
  }
  return labels;
}

std::vector<double> column_means(const Matrix& points) {
  std::vector<double> mu(points.cols(), 0.0);
  for (std::size_t r = 0; r < points.rows(); ++r)
    for (std::size_t c = 0; c < points.cols(); ++c) mu[c] += points(r, c);
  for (double& v : mu) v /= static_cast<double>(points.rows());
  return mu;
}

// Upper triangle of sum (x - mu)(x - mu)^T over rows [begin, end).
void accumulate_scatter(const Matrix& points, const std::vector<double>& mu, std::size_t begin,
                        std::size_t end, std::vector<double>& acc, std::vector<double>& centered) {
  const std::size_t d = points.cols();
  for (std::size_t r = begin; r < end; ++r) {
    for (std::size_t c = 0; c < d; ++c) centered[c] = points(r, c) - mu[c];
    for (std::size_t i = 0; i < d; ++i) {
      const double ci = centered[i];
      double* row = acc.data() + i * d;
      for (std::size_t j = i; j < d; ++j) row[j] += ci * centered[j];
    }
  }
}

Matrix finish_covariance(const std::vector<double>& scatter, std::size_t d, std::size_t n) {
  Matrix cov(d, d);
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) cov(i, j) = cov(j, i) = scatter[i * d + j] / denom;
  return cov;
}

double silhouette_at(const Matrix& points, std::span<const std::size_t> labels, std::size_t k,
                     std::size_t i, std::vector<double>& sums, std::vector<std::size_t>& counts) {
  std::fill(sums.begin(), sums.end(), 0.0);
  std::fill(counts.begin(), counts.end(), 0);
  for (std::size_t j = 0; j < points.rows(); ++j) {
    ++counts[labels[j]];
    if (j != i) sums[labels[j]] += distance(points.row(i), points.row(j));
  }
  const std::size_t own = labels[i];
  if (counts[own] <= 1) return 0.0;
  const double a = sums[own] / static_cast<double>(counts[own] - 1);
  double b = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c)
    if (c != own && counts[c] > 0) b = std::min(b, sums[c] / static_cast<double>(counts[c]));
  if (!std::isfinite(b)) return 0.0;
  const double m = std::max(a, b);
  return m > 0.0 ? (b - a) / m : 0.0;
}

bool better(const NearestHit& a, std::uint64_t key_a, const NearestHit& b, std::uint64_t key_b) {
  if (a.squared_distance != b.squared_distance) return a.squared_distance < b.squared_distance;
  if (key_a != key_b) return key_a < key_b;
  return a.index < b.index;
}

std::size_t nearest_centroid(std::span<const double> p, const Matrix& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(p, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

double energy_statistic(const Matrix& dist, std::span<const unsigned char> in_first) {
  const std::size_t m = dist.rows();
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  std::size_t n1 = 0;
  for (std::size_t i = 0; i < m; ++i) {
    n1 += in_first[i];
    const auto row = dist.row(i);
    for (std::size_t j = i + 1; j < m; ++j) {
      if (in_first[i] != in_first[j])
        sxy += row[j];
      else if (in_first[i])
        sxx += row[j];
      else
        syy += row[j];
    }
  }
  const double a = static_cast<double>(n1), b = static_cast<double>(m - n1);
  return 2.0 * sxy / (a * b) - 2.0 * sxx / (a * a) - 2.0 * syy / (b * b);
}

namespace serial {

Matrix pairwise_distances(const Matrix& points) {
  const std::size_t n = points.rows();
  Matrix dist(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = distance(points.row(i), points.row(j));
  return dist;
}

std::vector<double> permutation_statistics(const Matrix& dist, std::size_t n1,
                                           std::size_t permutations, std::uint64_t seed) {
  std::vector<double> out(permutations);
  for (std::size_t p = 0; p < permutations; ++p)
    out[p] = energy_statistic(dist, shuffled_labels(dist.rows(), n1, seed, p));
  return out;
}

Matrix covariance(const Matrix& points) {
  const std::size_t d = points.cols();
  const auto mu = column_means(points);
  std::vector<double> scatter(d * d, 0.0), centered(d);
  accumulate_scatter(points, mu, 0, points.rows(), scatter, centered);
  return finish_covariance(scatter, d, points.rows());
}

std::vector<double> silhouette_values(const Matrix& points, std::span<const std::size_t> labels,
                                      std::size_t k) {
  std::vector<double> out(points.rows());
  std::vector<double> sums(k);
  std::vector<std::size_t> counts(k);
  for (std::size_t i = 0; i < points.rows(); ++i) out[i] = silhouette_at(points, labels, k, i, sums, counts);
  return out;
}

NearestHit nearest_row(std::span<const double> query, const Matrix& table,
                       std::span<const std::uint64_t> keys) {
  NearestHit best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t r = 0; r < table.rows(); ++r) {
    NearestHit hit{r, squared_distance(query, table.row(r))};
    if (better(hit, keys[r], best, keys[best.index])) best = hit;
  }
  return best;
}

std::vector<std::size_t> assign_to_centroids(const Matrix& points, const Matrix& centroids) {
  std::vector<std::size_t> labels(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) labels[i] = nearest_centroid(points.row(i), centroids);
  return labels;
}

}  // namespace serial

namespace parallel {

Matrix pairwise_distances(const Matrix& points) {
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
  Matrix dist(points.rows(), points.rows());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::ptrdiff_t j = 0; j < n; ++j)
      if (j != i) dist(i, j) = distance(points.row(i), points.row(j));
  return dist;
}

std::vector<double> permutation_statistics(const Matrix& dist, std::size_t n1,
                                           std::size_t permutations, std::uint64_t seed) {
  std::vector<double> out(permutations);
  const auto count = static_cast<std::ptrdiff_t>(permutations);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < count; ++p)
    out[p] = energy_statistic(dist, shuffled_labels(dist.rows(), n1, seed, static_cast<std::size_t>(p)));
  return out;
}

Matrix covariance(const Matrix& points) {
  const std::size_t d = points.cols();
  const auto mu = column_means(points);
  const std::size_t blocks = (points.rows() + kCovarianceBlock - 1) / kCovarianceBlock;
  std::vector<std::vector<double>> partial(blocks, std::vector<double>(d * d, 0.0));
#pragma omp parallel
  {
    std::vector<double> centered(d);
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
      const std::size_t begin = static_cast<std::size_t>(b) * kCovarianceBlock;
      accumulate_scatter(points, mu, begin, std::min(begin + kCovarianceBlock, points.rows()),
                         partial[b], centered);
    }
  }
  // Fixed-order reduction keeps the result independent of the thread count.
  std::vector<double> scatter(d * d, 0.0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < scatter.size(); ++i) scatter[i] += p[i];
  return finish_covariance(scatter, d, points.rows());
}

std::vector<double> silhouette_values(const Matrix& points, std::span<const std::size_t> labels,
                                      std::size_t k) {
  std::vector<double> out(points.rows());
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
#pragma omp parallel
  {
    std::vector<double> sums(k);
    std::vector<std::size_t> counts(k);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[i] = silhouette_at(points, labels, k, static_cast<std::size_t>(i), sums, counts);
  }
  return out;
}

NearestHit nearest_row(std::span<const double> query, const Matrix& table,
                       std::span<const std::uint64_t> keys) {
  NearestHit best{0, std::numeric_limits<double>::infinity()};
  const auto n = static_cast<std::ptrdiff_t>(table.rows());
#pragma omp parallel
  {
    NearestHit local{0, std::numeric_limits<double>::infinity()};
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t r = 0; r < n; ++r) {
      NearestHit hit{static_cast<std::size_t>(r), squared_distance(query, table.row(r))};
      if (better(hit, keys[r], local, keys[local.index])) local = hit;
    }
#pragma omp critical(rcxi_nearest_row)
    {
      if (better(local, keys[local.index], best, keys[best.index])) best = local;
    }
  }
  return best;
}

std::vector<std::size_t> assign_to_centroids(const Matrix& points, const Matrix& centroids) {
  std::vector<std::size_t> labels(points.rows());
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) labels[i] = nearest_centroid(points.row(i), centroids);
  return labels;
}

}  // namespace parallel

}  // namespace rcxi::kernels
