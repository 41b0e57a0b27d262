#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rcxi {

/// A point of the latent state space R^d.
struct State {
  std::vector<double> values;

  State() = default;
  explicit State(std::size_t dim, double fill = 0.0) : values(dim, fill) {}
  explicit State(std::vector<double> v) : values(std::move(v)) {}
  State(std::initializer_list<double> v) : values(v) {}

  std::size_t dim() const noexcept { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  auto begin() const noexcept { return values.begin(); }
  auto end() const noexcept { return values.end(); }
  std::span<const double> view() const noexcept { return values; }
  std::span<double> view() noexcept { return values; }

  friend bool operator==(const State&, const State&) = default;
};

/// A symbol of the input stream. Symbols never appear where a State is expected.
struct SymbolicInput {
  std::uint64_t id = 0;
  std::string text;

  friend bool operator==(const SymbolicInput&, const SymbolicInput&) = default;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
bool all_finite(std::span<const double> a);

// Bitwise comparison (distinguishes -0.0 from 0.0, equal NaN payloads compare equal).
bool bit_equal(std::span<const double> a, std::span<const double> b);
bool bit_equal(const std::vector<State>& a, const std::vector<State>& b);

/// Dense row-major matrix used by the numerical kernels.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(std::span<const State> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace rcxi
