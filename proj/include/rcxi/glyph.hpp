#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcxi/dynamics.hpp"
#include "rcxi/tension.hpp"

namespace rcxi {

inline constexpr std::size_t kGlyphHistogramBins = 16;
inline constexpr std::size_t kMinGlyphWindow = 8;

struct Glyph {
  State vector;
  std::size_t window = 0;
  std::uint64_t encoder_seed = 0;
};

struct VocabEntry {
  std::uint64_t id = 0;
  std::string text;
  State embedding;

  friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

struct Vocab {
  std::size_t dim = 0;
  std::vector<VocabEntry> entries;

  /// Throws Error on duplicate ids or mismatched embedding lengths.
  void validate() const;
  friend bool operator==(const Vocab&, const Vocab&) = default;
};

struct NearestSymbol {
  std::uint64_t id = 0;
  double distance = 0.0;
};

struct AnchorReport {
  std::uint64_t nearest_id = 0;
  double nearest_distance = 0.0;
  double delta = 0.0;
  bool anchored = false;  // nearest_distance >= delta
  // Distance to the embedding of the current input symbol, when it is in the vocab.
  std::optional<std::uint64_t> input_id;
  std::optional<double> input_distance;
};

/// Feature vector (window state centroid | 16-bin xi histogram on [0, max xi] | mean xi | max xi)
/// over the last `window` tension values and the matching last `window` states.
std::vector<double> glyph_features(const Trajectory& trajectory, const TensionTrace& tension,
                                   std::size_t window);

/// dim x feature_len matrix of seeded standard-normal entries, filled row-major.
Matrix glyph_projection(std::size_t dim, std::size_t feature_len, std::uint64_t encoder_seed);

/// G = P f / sqrt(feature_len).
Glyph encode_glyph(const Trajectory& trajectory, const TensionTrace& tension, std::size_t window,
                   std::uint64_t encoder_seed);

/// Nearest vocab entry to the glyph; ties go to the lowest id.
NearestSymbol project_symbolic(const Glyph& glyph, const Vocab& vocab);

AnchorReport collapse_check(const Glyph& glyph, const Vocab& vocab, double delta,
                            std::optional<std::uint64_t> current_input = std::nullopt);

/// 5th percentile of all pairwise embedding distances.
double default_delta(const Vocab& vocab);

/// Vocab of `size` entries with standard-normal embeddings; ids 0..size-1.
Vocab synthetic_vocab(std::size_t size, std::size_t dim, std::uint64_t seed);

}  // namespace rcxi
