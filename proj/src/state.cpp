#include "rcxi/state.hpp"

#include <cmath>
#include <cstring>

#include "rcxi/error.hpp"

namespace rcxi {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

double norm(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return std::sqrt(acc);
}

bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

bool bit_equal(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

bool bit_equal(const std::vector<State>& a, const std::vector<State>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!bit_equal(a[i].view(), b[i].view())) return false;
  return true;
}

Matrix Matrix::from_rows(std::span<const State> rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().dim());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].dim() != m.cols())
      throw Error(ErrorCode::dimension_mismatch, "state",
                  "state " + std::to_string(r) + " has dimension " +
                      std::to_string(rows[r].dim()) + ", expected " + std::to_string(m.cols()));
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

}  // namespace rcxi
