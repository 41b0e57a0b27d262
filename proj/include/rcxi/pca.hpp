#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rcxi/state.hpp"

namespace rcxi {

/// Eigenpairs of a symmetric matrix, eigenvalues descending; column i of
/// `vectors` belongs to `values[i]`.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic Jacobi rotations; accurate to working precision for small dense matrices.
SymmetricEigen symmetric_eigen(const Matrix& symmetric);

struct Projection {
  State mean;
  std::vector<State> components;          // orthonormal, largest-|entry| positive
  std::vector<double> explained_variance; // non-increasing
  Matrix projected;                       // rows = centered states . components
};

/// Principal components of the sample covariance. When there are fewer states
/// than dimensions the (smaller) Gram matrix is decomposed instead.
Projection pca_project(std::span<const State> states, std::size_t n_components);

/// Maps a state into an existing projection's coordinates.
std::vector<double> project_point(const Projection& projection, const State& state);

/// Annulus concentration of the PC1-PC2 points: max(0, 1 - var(r) / mean(r)^2)
/// with r the distance to the point-cloud center; 0 when mean(r) < 1e-9.
double torus_score(const Projection& projection);

/// Decision threshold separating annular (score >= threshold) from blob-like
/// point clouds. Isotropic Gaussian blobs score 1 - (4 - pi)/pi ~ 0.727.
inline constexpr double kTorusThreshold = 0.80;

}  // namespace rcxi
