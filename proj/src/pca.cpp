#include "rcxi/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rcxi/error.hpp"
#include "rcxi/kernels.hpp"

namespace rcxi {

namespace {

constexpr std::size_t kMaxSweeps = 100;
constexpr std::size_t kMinTorusPoints = 20;

void canonical_sign(std::span<double> v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  if (v[arg] < 0.0)
    for (double& x : v) x = -x;
}

// Extends `basis` (orthonormal rows) to `target` vectors with Gram-Schmidt over e_0, e_1, ...
void complete_basis(std::vector<State>& basis, std::size_t dim, std::size_t target) {
  for (std::size_t e = 0; e < dim && basis.size() < target; ++e) {
    State v(dim);
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const State& b : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < dim; ++i) dot += v[i] * b[i];
        for (std::size_t i = 0; i < dim; ++i) v[i] -= dot * b[i];
      }
    const double n = norm(v.view());
    if (n < 1e-8) continue;
    for (double& x : v.values) x /= n;
    canonical_sign(v.view());
    basis.push_back(std::move(v));
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(const Matrix& symmetric) {
  const std::size_t n = symmetric.rows();
  if (symmetric.cols() != n) throw Error(ErrorCode::dimension_mismatch, "matrix", "matrix must be square");
  Matrix a = symmetric;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double total = 0.0;
  for (double x : a.data()) total += x * x;
  const double tol = 1e-30 * total;

  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= tol) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

Projection pca_project(std::span<const State> states, std::size_t n_components) {
  if (states.size() < 2) throw Error(ErrorCode::invalid_input, "states", "PCA needs at least 2 states");
  const Matrix x = Matrix::from_rows(states);
  const std::size_t n = x.rows(), d = x.cols();
  if (n_components < 1 || n_components > d)
    throw Error(ErrorCode::invalid_parameter, "n_components",
                "n_components must lie in [1, " + std::to_string(d) + "]");

  Projection proj;
  proj.mean = State(d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) proj.mean[c] += x(r, c);
  for (double& m : proj.mean.values) m /= static_cast<double>(n);
  Matrix centered = x;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) centered(r, c) -= proj.mean[c];

  double total_variance = 0.0;
  for (double v : centered.data()) total_variance += v * v;
  if (total_variance == 0.0)
    throw Error(ErrorCode::degenerate, "states", "zero-variance data: all states are identical");

  if (n >= d) {
    const SymmetricEigen eig = symmetric_eigen(kernels::parallel::covariance(x));
    for (std::size_t c = 0; c < n_components; ++c) {
      State comp(d);
      for (std::size_t r = 0; r < d; ++r) comp[r] = eig.vectors(r, c);
      canonical_sign(comp.view());
      proj.components.push_back(std::move(comp));
      proj.explained_variance.push_back(std::max(eig.values[c], 0.0));
    }
  } else {
    // Gram route: C v = lambda v with v = X^T u / sqrt(lambda (n - 1)).
    const double denom = static_cast<double>(n - 1);
    Matrix gram(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t c = 0; c < d; ++c) dot += centered(i, c) * centered(j, c);
        gram(i, j) = gram(j, i) = dot / denom;
      }
    const SymmetricEigen eig = symmetric_eigen(gram);
    const double floor = 1e-12 * eig.values.front();
    for (std::size_t c = 0; c < n_components && c < n && eig.values[c] > floor; ++c) {
      State comp(d);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) comp[k] += centered(i, k) * eig.vectors(i, c);
      const double len = norm(comp.view());
      for (double& v : comp.values) v /= len;
      canonical_sign(comp.view());
      proj.components.push_back(std::move(comp));
      proj.explained_variance.push_back(eig.values[c]);
    }
    complete_basis(proj.components, d, n_components);
    proj.explained_variance.resize(proj.components.size(), 0.0);
  }

  proj.projected = Matrix(n, n_components);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n_components; ++c) {
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += centered(r, k) * proj.components[c][k];
      proj.projected(r, c) = dot;
    }
  return proj;
}

std::vector<double> project_point(const Projection& projection, const State& state) {
  if (state.dim() != projection.mean.dim())
    throw Error(ErrorCode::dimension_mismatch, "state", "state and projection dimensions differ");
  std::vector<double> out(projection.components.size(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c)
    for (std::size_t k = 0; k < state.dim(); ++k)
      out[c] += (state[k] - projection.mean[k]) * projection.components[c][k];
  return out;
}

double torus_score(const Projection& projection) {
  if (projection.projected.cols() < 2)
    throw Error(ErrorCode::invalid_input, "projection", "torus score needs at least 2 components");
  const std::size_t n = projection.projected.rows();
  if (n < kMinTorusPoints)
    throw Error(ErrorCode::invalid_input, "projection",
                "torus score needs at least " + std::to_string(kMinTorusPoints) + " points");
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cx += projection.projected(i, 0);
    cy += projection.projected(i, 1);
  }
  cx /= static_cast<double>(n);
  cy /= static_cast<double>(n);
  std::vector<double> radii(n);
  double mean_r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    radii[i] = std::hypot(projection.projected(i, 0) - cx, projection.projected(i, 1) - cy);
    mean_r += radii[i];
  }
  mean_r /= static_cast<double>(n);
  if (mean_r < 1e-9) return 0.0;
  double var = 0.0;
  for (double r : radii) var += (r - mean_r) * (r - mean_r);
  var /= static_cast<double>(n);
  return std::max(0.0, 1.0 - var / (mean_r * mean_r));
}

}  // namespace rcxi
