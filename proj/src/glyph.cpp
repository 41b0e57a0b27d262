#include "rcxi/glyph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "rcxi/error.hpp"
#include "rcxi/kernels.hpp"
#include "rcxi/stats.hpp"

namespace rcxi {

namespace {

struct VocabTable {
  Matrix embeddings;
  std::vector<std::uint64_t> ids;
};

VocabTable table_of(const Vocab& vocab) {
  VocabTable t;
  t.embeddings = Matrix(vocab.entries.size(), vocab.dim);
  for (std::size_t r = 0; r < vocab.entries.size(); ++r) {
    const auto& e = vocab.entries[r].embedding;
    std::copy(e.begin(), e.end(), t.embeddings.row(r).begin());
    t.ids.push_back(vocab.entries[r].id);
  }
  return t;
}

}  // namespace

void Vocab::validate() const {
  if (dim == 0) throw Error(ErrorCode::invalid_input, "dim", "vocab dimension must be >= 1");
  std::set<std::uint64_t> seen;
  for (const auto& e : entries) {
    if (e.embedding.dim() != dim)
      throw Error(ErrorCode::dimension_mismatch, "embedding",
                  "vocab entry " + std::to_string(e.id) + " has dimension " + std::to_string(e.embedding.dim()));
    if (!all_finite(e.embedding.view()))
      throw Error(ErrorCode::non_finite, "embedding", "vocab entry " + std::to_string(e.id) + " is not finite");
    if (!seen.insert(e.id).second)
      throw Error(ErrorCode::invalid_input, "id", "duplicate vocab id " + std::to_string(e.id));
  }
}

std::vector<double> glyph_features(const Trajectory& t, const TensionTrace& tension, std::size_t window) {
  if (t.dim == 0) throw Error(ErrorCode::invalid_parameter, "dim", "glyph dimension must be >= 1");
  if (window < kMinGlyphWindow)
    throw Error(ErrorCode::invalid_parameter, "window",
                "glyph window must be >= " + std::to_string(kMinGlyphWindow));
  if (window > tension.values.size() || window > t.states.size())
    throw Error(ErrorCode::invalid_parameter, "window",
                "glyph window " + std::to_string(window) + " exceeds the " +
                    std::to_string(tension.values.size()) + " tension values");
  const std::size_t d = t.dim;
  std::vector<double> f(d + kGlyphHistogramBins + 2, 0.0);

  for (std::size_t k = t.states.size() - window; k < t.states.size(); ++k)
    for (std::size_t i = 0; i < d; ++i) f[i] += t.states[k][i];
  for (std::size_t i = 0; i < d; ++i) f[i] /= static_cast<double>(window);

  const std::span<const double> xi(tension.values.data() + (tension.values.size() - window), window);
  const double xi_max = *std::max_element(xi.begin(), xi.end());
  for (double v : xi) {
    std::size_t bin = 0;
    if (xi_max > 0.0)
      bin = std::min(kGlyphHistogramBins - 1,
                     static_cast<std::size_t>(static_cast<double>(kGlyphHistogramBins) * v / xi_max));
    f[d + bin] += 1.0 / static_cast<double>(window);
  }
  f[d + kGlyphHistogramBins] = mean(xi);
  f[d + kGlyphHistogramBins + 1] = xi_max;
  return f;
}

Matrix glyph_projection(std::size_t dim, std::size_t feature_len, std::uint64_t encoder_seed) {
  Matrix p(dim, feature_len);
  Rng rng(encoder_seed, streams::glyph_projection, dim);
  for (double& v : p.data()) v = rng.normal();
  return p;
}

Glyph encode_glyph(const Trajectory& t, const TensionTrace& tension, std::size_t window,
                   std::uint64_t encoder_seed) {
  const auto f = glyph_features(t, tension, window);
  const Matrix p = glyph_projection(t.dim, f.size(), encoder_seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.size()));
  Glyph g;
  g.vector = State(t.dim);
  for (std::size_t r = 0; r < t.dim; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c) acc += p(r, c) * f[c];
    g.vector[r] = acc * scale;
  }
  g.window = window;
  g.encoder_seed = encoder_seed;
  return g;
}

NearestSymbol project_symbolic(const Glyph& glyph, const Vocab& vocab) {
  if (vocab.entries.empty()) throw Error(ErrorCode::invalid_input, "vocab", "empty vocab");
  if (vocab.dim != glyph.vector.dim())
    throw Error(ErrorCode::dimension_mismatch, "vocab",
                "vocab dimension " + std::to_string(vocab.dim) + " differs from glyph dimension " +
                    std::to_string(glyph.vector.dim()));
  const VocabTable t = table_of(vocab);
  const auto hit = kernels::parallel::nearest_row(glyph.vector.view(), t.embeddings, t.ids);
  return {t.ids[hit.index], std::sqrt(hit.squared_distance)};
}

AnchorReport collapse_check(const Glyph& glyph, const Vocab& vocab, double delta,
                            std::optional<std::uint64_t> current_input) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorCode::invalid_parameter, "delta", "delta must be > 0");
  const NearestSymbol nearest = project_symbolic(glyph, vocab);
  AnchorReport r;
  r.nearest_id = nearest.id;
  r.nearest_distance = nearest.distance;
  r.delta = delta;
  r.anchored = nearest.distance >= delta;
  if (current_input) {
    r.input_id = current_input;
    for (const auto& e : vocab.entries)
      if (e.id == *current_input) r.input_distance = distance(glyph.vector.view(), e.embedding.view());
  }
  return r;
}

double default_delta(const Vocab& vocab) {
  if (vocab.entries.size() < 2)
    throw Error(ErrorCode::invalid_input, "vocab", "default delta needs at least 2 vocab entries");
  const VocabTable t = table_of(vocab);
  const Matrix dist = kernels::parallel::pairwise_distances(t.embeddings);
  std::vector<double> pairs;
  pairs.reserve(dist.rows() * (dist.rows() - 1) / 2);
  for (std::size_t i = 0; i < dist.rows(); ++i)
    for (std::size_t j = i + 1; j < dist.rows(); ++j) pairs.push_back(dist(i, j));
  return quantile(pairs, 0.05);
}

Vocab synthetic_vocab(std::size_t size, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorCode::invalid_parameter, "dim", "vocab dimension must be >= 1");
  Vocab v;
  v.dim = dim;
  Rng rng(seed, streams::vocab, dim);
  for (std::size_t k = 0; k < size; ++k) {
    VocabEntry e;
    e.id = k;
    e.text = "tok" + std::to_string(k);
    e.embedding = State(dim);
    for (double& x : e.embedding.values) x = rng.normal();
    v.entries.push_back(std::move(e));
  }
  return v;
}

}  // namespace rcxi
