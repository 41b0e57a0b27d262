#include "rcxi/rng.hpp"

#include <cmath>

namespace rcxi {

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(substream), hi(substream)};
  engine_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    double v = *spare_;
    spare_.reset();
    return v;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  return u * m;
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection on the largest multiple of n.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return x % n;
}

}  // namespace rcxi
