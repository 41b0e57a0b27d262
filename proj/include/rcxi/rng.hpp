#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace rcxi {

// Named sub-streams. A (seed, stream, substream) triple identifies an
// independent, reproducible sequence.
namespace streams {
inline constexpr std::uint64_t initial_state = 1;
inline constexpr std::uint64_t noise = 2;
inline constexpr std::uint64_t lipschitz_probe = 3;
inline constexpr std::uint64_t lipschitz_noise = 4;
inline constexpr std::uint64_t permutation = 5;
inline constexpr std::uint64_t kmeans = 6;
inline constexpr std::uint64_t glyph_projection = 7;
inline constexpr std::uint64_t vocab = 8;
inline constexpr std::uint64_t synthetic = 9;
}  // namespace streams

/// Portable seeded generator: std::mt19937_64 keyed through std::seed_seq
/// (both bit-specified by the C++ standard) with hand-written transforms,
/// since the standard distributions are implementation-defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via the Marsaglia polar method.
  double normal();
  /// Uniform integer in [0, n), unbiased. n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace rcxi
