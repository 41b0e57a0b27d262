#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "rcxi/dynamics.hpp"
#include "rcxi/error.hpp"

namespace rcxi::test {

inline MapSpec affine(std::size_t dim, double lipschitz, double offset = 0.0) {
  MapSpec s;
  s.dim = dim;
  s.params = AffineParams{lipschitz, std::vector<double>(dim, offset), {}};
  return s;
}

inline MapSpec rotation(std::size_t dim, double rho, double theta, double radius = 0.0) {
  MapSpec s;
  s.dim = dim;
  s.params = RotationParams{rho, theta, radius};
  return s;
}

inline MapSpec delayed(std::size_t dim, std::size_t onset, double pre, double lipschitz, double offset = 0.0) {
  MapSpec s;
  s.dim = dim;
  s.params = DelayedParams{onset, pre, lipschitz, std::vector<double>(dim, offset)};
  return s;
}

// d=1 basins f(x) = 0.5x + 2 (x >= 0) and 0.5x - 2 (x < 0).
inline MapSpec two_basin() {
  MapSpec s;
  s.dim = 1;
  s.params = MultiBasinParams{0, {0.0}, {Basin{0.5, {-2.0}}, Basin{0.5, {2.0}}}};
  return s;
}

inline NoiseSpec gaussian(double sigma) { return NoiseSpec{NoiseKind::gaussian, sigma}; }

inline InputSchedule schedule(std::initializer_list<std::uint64_t> ids) {
  InputSchedule s;
  s.tokens.clear();
  for (auto id : ids) s.tokens.push_back(SymbolicInput{id, "tok" + std::to_string(id)});
  return s;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("rcxi-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace rcxi::test

#define CHECK_RCXI_ERROR(expr, expected_code)          \
  do {                                                 \
    bool rcxi_thrown = false;                          \
    try {                                              \
      (void)(expr);                                    \
    } catch (const ::rcxi::Error& rcxi_e) {            \
      rcxi_thrown = true;                              \
      CHECK(rcxi_e.code() == (expected_code));         \
    }                                                  \
    CHECK_MESSAGE(rcxi_thrown, "expected rcxi::Error"); \
  } while (0)
