#include "rcxi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "rcxi/error.hpp"
#include "rcxi/stats.hpp"
#include "rcxi/svg.hpp"
#include "rcxi/trace_io.hpp"

namespace rcxi {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxAttractorMembers = 5000;
constexpr std::size_t kMaxDistanceQueries = 500;

template <class T, class F>
Section<T> attempt(F&& f) {
  try {
    return Section<T>{f(), "ok"};
  } catch (const Error& e) {
    return Section<T>::failed(std::string(to_string(e.code())) + ": " + e.what());
  }
}

std::vector<State> strided(std::span<const State> states, std::size_t max_count) {
  const std::size_t m = std::min(states.size(), max_count);
  std::vector<State> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(states[i * states.size() / m]);
  return out;
}

// Closed-form E[xi^2] when the map is affine without input offsets.
std::optional<double> closed_form_mean_sq(const Trajectory& t) {
  if (!t.map || !t.noise || t.noise->kind == NoiseKind::none) return std::nullopt;
  if (t.map->family() != MapFamily::affine) return std::nullopt;
  const auto& p = std::get<AffineParams>(t.map->params);
  if (!p.input_offsets.empty() || p.lipschitz >= 1.0) return std::nullopt;
  const double v = affine_stationary_mean_sq(t.dim, p.lipschitz, t.noise->sigma);
  return v > 0.0 ? std::optional<double>(v) : std::nullopt;
}

void emit(const ProgressSink& progress, const std::string& event) {
  if (progress) progress(event);
}

}  // namespace

Analysis analyze(const Trajectory& t, const AnalysisConfig& cfg, const std::optional<Vocab>& vocab_in,
                 const ProgressSink& progress) {
  t.validate();
  Analysis out;
  AnalysisReport& r = out.report;
  const std::size_t n_states = t.states.size();

  emit(progress, "tension");
  out.tension = tension_series(t);
  const std::size_t burn_in = cfg.burn_in.value_or(n_states / 10);
  const std::size_t window = cfg.window.value_or(n_states / 5);
  out.tension.burn_in = std::min(burn_in, out.tension.values.size());
  r.tension = summarize(out.tension);

  const std::span<const double> stationary(out.tension.values.data() + out.tension.burn_in,
                                           out.tension.values.size() - out.tension.burn_in);
  json resolved;
  double bound = 0.0;
  std::string bound_source = "flag";
  if (cfg.bound) {
    bound = *cfg.bound;
  } else if (auto cf = closed_form_mean_sq(t)) {
    bound = 2.0 * *cf;
    bound_source = "2x affine closed form";
  } else if (!stationary.empty()) {
    std::vector<double> sq(stationary.begin(), stationary.end());
    for (double& v : sq) v *= v;
    bound = quantile(sq, 0.9);
    bound_source = "90th percentile of observed xi^2";
  }
  r.moment_bound = attempt<MomentBoundReport>([&] { return moment_bound_check(out.tension, bound, window); });

  double threshold = 0.0;
  if (cfg.tension_threshold)
    threshold = *cfg.tension_threshold;
  else if (!stationary.empty())
    threshold = quantile(stationary, 0.1);
  r.persistence = attempt<PersistenceReport>([&] { return persistence_check(out.tension, threshold, cfg.min_run); });

  if (t.map) {
    emit(progress, "lipschitz");
    r.lipschitz = attempt<LipschitzEstimate>([&] {
      InputSchedule schedule;
      if (!t.inputs.empty()) schedule.tokens = t.inputs;
      LipschitzOptions o;
      o.steps = cfg.lipschitz_steps;
      o.probes = cfg.probes;
      o.seed = cfg.seed;
      return estimate_lipschitz(*t.map, t.noise.value_or(NoiseSpec{}), schedule, o);
    });
  } else {
    r.lipschitz = Section<LipschitzEstimate>::failed("unavailable: trace has no map_spec");
  }

  emit(progress, "convergence");
  r.convergence = attempt<DistConvergenceReport>([&] {
    ConvergenceOptions o;
    o.burn_in = burn_in;
    o.window = window;
    o.alpha = cfg.alpha;
    o.permutations = cfg.permutations;
    o.seed = cfg.seed;
    o.max_points = cfg.max_points;
    return convergence_test(t, o);
  });

  emit(progress, "attractors");
  const std::size_t sample_end = std::max(burn_in, n_states - n_states / 10);
  r.attractors = attempt<AttractorSummary>([&] {
    if (burn_in >= sample_end) throw Error(ErrorCode::invalid_input, "burn_in", "no states between burn-in and the final 10%");
    const std::span<const State> sample(t.states.data() + burn_in, sample_end - burn_in);
    AttractorOptions o;
    o.k_max = cfg.k_max;
    o.seed = cfg.seed;
    const AttractorSet set = find_attractors(sample, o);
    AttractorSummary a;
    a.k = set.k;
    a.centroids = set.centroids;
    for (const auto& m : set.member_indices) a.sizes.push_back(m.size());
    a.dispersion = set.dispersion;
    a.silhouette = set.silhouette;
    const auto members = strided(sample, kMaxAttractorMembers);
    const auto queries = strided(std::span<const State>(t.states.data() + sample_end, n_states - sample_end),
                                 kMaxDistanceQueries);
    std::vector<double> dists;
    for (const auto& q : queries) dists.push_back(dist_to_attractor(q, members));
    if (!dists.empty()) {
      a.tail_distance_median = median(dists);
      a.tail_distance_p95 = quantile(dists, 0.95);
    }
    return a;
  });

  emit(progress, "pca");
  const std::size_t pca_begin = std::min(burn_in, n_states - 2);
  r.pca = attempt<PcaSummary>([&] {
    if (t.dim < 2) throw Error(ErrorCode::invalid_input, "dim", "PCA projection needs dim >= 2");
    Projection p = pca_project(std::span<const State>(t.states.data() + pca_begin, n_states - pca_begin), 2);
    PcaSummary s;
    s.explained_variance = p.explained_variance;
    s.torus_score = torus_score(p);
    s.toroidal = s.torus_score >= kTorusThreshold;
    out.projection = std::move(p);
    out.projection_offset = pca_begin;
    return s;
  });
  if (!out.projection && t.dim >= 2) {
    // Keep the projection for the figures even when the torus score is unavailable.
    try {
      out.projection = pca_project(std::span<const State>(t.states.data() + pca_begin, n_states - pca_begin), 2);
      out.projection_offset = pca_begin;
    } catch (const Error&) {
    }
  }

  emit(progress, "reducibility");
  r.reducibility = attempt<ReducibilityReport>([&] { return symbolic_reducibility(t); });

  emit(progress, "glyph");
  const std::size_t encoder_window = std::min(cfg.encoder_window, out.tension.values.size());
  double delta = 0.0;
  std::string vocab_source = cfg.vocab_name;
  r.anchor = attempt<AnchorReport>([&] {
    const Vocab vocab = vocab_in ? *vocab_in : synthetic_vocab(cfg.vocab_size, t.dim, cfg.encoder_seed);
    if (!vocab_in) vocab_source = "synthetic";
    delta = cfg.delta ? *cfg.delta : default_delta(vocab);
    const Glyph g = encode_glyph(t, out.tension, encoder_window, cfg.encoder_seed);
    std::optional<std::uint64_t> current;
    if (t.trailing_input)
      current = t.trailing_input->id;
    else if (!t.inputs.empty())
      current = t.inputs.back().id;
    return collapse_check(g, vocab, delta, current);
  });

  resolved["trace"] = cfg.trace_name;
  resolved["states"] = n_states;
  resolved["dim"] = t.dim;
  resolved["burn_in"] = burn_in;
  resolved["window"] = window;
  resolved["alpha"] = cfg.alpha;
  resolved["permutations"] = cfg.permutations;
  resolved["max_points"] = cfg.max_points;
  resolved["k_max"] = cfg.k_max;
  resolved["probes"] = cfg.probes;
  resolved["lipschitz_steps"] = cfg.lipschitz_steps;
  resolved["bound"] = bound;
  resolved["bound_source"] = bound_source;
  resolved["tension_threshold"] = threshold;
  resolved["min_run"] = cfg.min_run;
  resolved["encoder_window"] = encoder_window;
  resolved["delta"] = delta;
  resolved["vocab"] = vocab_source;
  resolved["vocab_size"] = vocab_in ? vocab_in->entries.size() : cfg.vocab_size;
  resolved["require"] = cfg.require;
  resolved["torus_threshold"] = kTorusThreshold;
  if (t.map) resolved["map_spec"] = *t.map;
  if (t.noise) resolved["noise_spec"] = *t.noise;
  r.config = resolved;
  r.seeds = json{{"analysis", cfg.seed}, {"encoder", cfg.encoder_seed}, {"trace", t.seed ? json(*t.seed) : json(nullptr)}};

  evaluate_checks(r, cfg.require);
  emit(progress, "done");
  return out;
}

void emit_report(const Analysis& analysis, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw Error(ErrorCode::io, out_dir.string(), "cannot create output directory " + out_dir.string());

  write_file(out_dir / "report.json", to_json(analysis.report).dump(2) + "\n");

  std::string xi = "step,xi\n";
  for (std::size_t k = 0; k < analysis.tension.values.size(); ++k)
    xi += std::to_string(k) + "," + format_double(analysis.tension.values[k]) + "\n";
  write_file(out_dir / "xi_trace.csv", xi);

  std::optional<double> bound_line;
  if (analysis.report.moment_bound.ok()) bound_line = std::sqrt(analysis.report.moment_bound.value->bound);
  write_file(out_dir / "xi.svg",
             svg::series_plot(analysis.tension.values, bound_line, "Epistemic tension over time", "xi_n",
                              "sqrt(moment bound)"));

  if (analysis.projection) {
    const Projection& p = *analysis.projection;
    std::string csv = "step,pc1,pc2\n";
    for (std::size_t i = 0; i < p.projected.rows(); ++i)
      csv += std::to_string(analysis.projection_offset + i) + "," + format_double(p.projected(i, 0)) + "," +
             format_double(p.projected(i, 1)) + "\n";
    write_file(out_dir / "pca.csv", csv);

    std::vector<std::vector<double>> centroids;
    if (analysis.report.attractors.ok())
      for (const auto& c : analysis.report.attractors.value->centroids) centroids.push_back(project_point(p, c));
    write_file(out_dir / "pca.svg", svg::trajectory_plot(p.projected, centroids, "Trajectory in PC1-PC2"));
  }
}

}  // namespace rcxi
