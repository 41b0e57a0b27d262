#include "rcxi/lipschitz.hpp"

#include <algorithm>
#include <cmath>

#include "rcxi/error.hpp"
#include "rcxi/stats.hpp"

namespace rcxi {

namespace {

constexpr double kRatioFloor = 1e-300;

struct ProbeResult {
  bool discarded = false;
  std::vector<double> log_ratios;
};

void random_direction(Rng& rng, std::span<double> out) {
  double n = 0.0;
  do {
    for (double& v : out) v = rng.normal();
    n = norm(out);
  } while (n == 0.0);
  for (double& v : out) v /= n;
}

ProbeResult run_probe(const RecursiveMap& f, const NoiseSpec& noise, const InputSchedule& inputs,
                      const LipschitzOptions& opt, std::size_t probe) {
  const std::size_t d = f.dim();
  Rng setup(opt.seed, streams::lipschitz_probe, probe);
  Rng noise_rng(opt.seed, streams::lipschitz_noise, probe);

  std::vector<double> a(d), b(d), fa(d), fb(d), dir(d), eps(d);
  for (double& v : a) v = setup.uniform(-1.0, 1.0);
  random_direction(setup, dir);

  auto place_companion = [&]() {
    const double scale = opt.perturbation * std::max(1.0, norm(a));
    for (std::size_t i = 0; i < d; ++i) b[i] = a[i] + scale * dir[i];
  };
  place_companion();

  ProbeResult result;
  result.log_ratios.reserve(opt.steps);
  for (std::size_t n = 0; n < opt.steps; ++n) {
    const double sep_in = distance(b, a);
    if (sep_in == 0.0 || !std::isfinite(sep_in)) {
      result.discarded = true;
      return result;
    }
    const SymbolicInput& s = inputs.at(n);
    f.apply(a, s, n, fa);
    f.apply(b, s, n, fb);
    const double sep_out = distance(fb, fa);
    result.log_ratios.push_back(std::log(std::max(sep_out / sep_in, kRatioFloor)));

    if (sep_out > 0.0 && std::isfinite(sep_out)) {
      for (std::size_t i = 0; i < d; ++i) dir[i] = (fb[i] - fa[i]) / sep_out;
    } else {
      random_direction(setup, dir);
    }
    draw_noise(noise, noise_rng, eps);
    for (std::size_t i = 0; i < d; ++i) a[i] = fa[i] + eps[i];
    if (!all_finite(a)) {
      result.discarded = true;
      return result;
    }
    place_companion();
  }
  return result;
}

}  // namespace

LipschitzEstimate estimate_lipschitz(const MapSpec& map_spec, const NoiseSpec& noise,
                                     const InputSchedule& inputs, const LipschitzOptions& options) {
  if (options.probes < 1) throw Error(ErrorCode::invalid_parameter, "probes", "probes must be >= 1");
  if (!(options.perturbation > 0.0) || !std::isfinite(options.perturbation))
    throw Error(ErrorCode::invalid_parameter, "perturbation", "perturbation must be > 0");
  if (options.steps < 2) throw Error(ErrorCode::invalid_parameter, "steps", "steps must be >= 2");
  if (options.onset_window < 1)
    throw Error(ErrorCode::invalid_parameter, "onset_window", "onset_window must be >= 1");
  if (inputs.tokens.empty()) throw Error(ErrorCode::invalid_parameter, "inputs", "empty input schedule");
  validate(noise);
  const RecursiveMap f = make_map(map_spec);

  std::vector<ProbeResult> results(options.probes);
  const auto probes = static_cast<std::ptrdiff_t>(options.probes);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t p = 0; p < probes; ++p)
    results[p] = run_probe(f, noise, inputs, options, static_cast<std::size_t>(p));

  LipschitzEstimate est;
  std::vector<double> step_mean(options.steps, 0.0);
  const std::size_t tail_begin = options.steps / 2;
  for (const auto& r : results) {
    if (r.discarded) {
      ++est.discarded;
      continue;
    }
    double tail = 0.0;
    for (std::size_t n = tail_begin; n < options.steps; ++n) tail += r.log_ratios[n];
    est.per_probe_ratios.push_back(std::exp(tail / static_cast<double>(options.steps - tail_begin)));
    for (std::size_t n = 0; n < options.steps; ++n) step_mean[n] += r.log_ratios[n];
  }
  est.probes = est.per_probe_ratios.size();
  if (est.probes == 0)
    throw Error(ErrorCode::degenerate, "perturbation",
                "all probes discarded: the perturbation underflows against the state scale");
  for (double& v : step_mean) v /= static_cast<double>(est.probes);
  est.l_hat = median(est.per_probe_ratios);

  // Trailing window means, scanned from the end for the last non-contracting window.
  const std::size_t w = options.onset_window;
  std::vector<double> prefix(options.steps + 1, 0.0);
  for (std::size_t n = 0; n < options.steps; ++n) prefix[n + 1] = prefix[n] + step_mean[n];
  std::optional<std::size_t> onset = 0;
  for (std::size_t m = options.steps; m-- > 0;) {
    const std::size_t begin = m + 1 >= w ? m + 1 - w : 0;
    const double window_mean = (prefix[m + 1] - prefix[begin]) / static_cast<double>(m + 1 - begin);
    if (window_mean >= 0.0) {
      onset = m + 1 < options.steps ? std::optional<std::size_t>(m + 1) : std::nullopt;
      break;
    }
  }
  est.onset_estimate = onset;
  return est;
}

}  // namespace rcxi
