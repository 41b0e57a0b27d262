#include "rcxi/dynamics.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "rcxi/error.hpp"

namespace rcxi {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::invalid_parameter, field, "invalid parameter '" + field + "': " + what);
}

void check_offset(const std::vector<double>& offset, std::size_t dim, const std::string& field) {
  if (!offset.empty() && offset.size() != dim)
    invalid(field, "length " + std::to_string(offset.size()) + " does not match dim " +
                       std::to_string(dim));
  if (!all_finite(offset)) invalid(field, "must be finite");
}

void check_lipschitz(double value, const std::string& field) {
  if (!std::isfinite(value) || value < 0.0) invalid(field, "must be finite and >= 0");
}

double offset_at(const std::vector<double>& offset, std::size_t i) {
  return offset.empty() ? 0.0 : offset[i];
}

void validate_spec(const MapSpec& spec) {
  if (spec.dim < 1) invalid("dim", "must be >= 1");
  const std::size_t d = spec.dim;
  switch (spec.family()) {
    case MapFamily::affine: {
      const auto& p = std::get<AffineParams>(spec.params);
      check_lipschitz(p.lipschitz, "lipschitz");
      check_offset(p.offset, d, "offset");
      for (std::size_t k = 0; k < p.input_offsets.size(); ++k) {
        if (p.input_offsets[k].size() != d)
          invalid("input_offsets", "entry " + std::to_string(k) + " has wrong length");
        check_offset(p.input_offsets[k], d, "input_offsets");
      }
      break;
    }
    case MapFamily::rotation_contraction: {
      const auto& p = std::get<RotationParams>(spec.params);
      if (d < 2) invalid("dim", "rotation-contraction needs dim >= 2");
      if (!(p.rho > 0.0 && p.rho < 1.0)) invalid("rho", "must lie in (0, 1)");
      if (!std::isfinite(p.theta)) invalid("theta", "must be finite");
      if (!(std::isfinite(p.radius) && p.radius >= 0.0)) invalid("radius", "must be finite and >= 0");
      break;
    }
    case MapFamily::delayed_contraction: {
      const auto& p = std::get<DelayedParams>(spec.params);
      if (!(std::isfinite(p.pre_lipschitz) && p.pre_lipschitz > 1.0))
        invalid("pre_lipschitz", "must be finite and > 1");
      if (!(p.lipschitz >= 0.0 && p.lipschitz < 1.0)) invalid("lipschitz", "must lie in [0, 1)");
      check_offset(p.offset, d, "offset");
      break;
    }
    case MapFamily::multi_basin: {
      const auto& p = std::get<MultiBasinParams>(spec.params);
      if (p.selector >= d) invalid("selector", "must be < dim");
      if (p.basins.size() != p.thresholds.size() + 1)
        invalid("basins", "need exactly one more basin than thresholds");
      for (std::size_t i = 0; i < p.thresholds.size(); ++i) {
        if (!std::isfinite(p.thresholds[i])) invalid("thresholds", "must be finite");
        if (i > 0 && !(p.thresholds[i] > p.thresholds[i - 1]))
          invalid("thresholds", "must be strictly increasing");
      }
      for (const auto& b : p.basins) {
        check_lipschitz(b.lipschitz, "basins.lipschitz");
        check_offset(b.offset, d, "basins.offset");
      }
      break;
    }
  }
}

}  // namespace

const char* to_string(MapFamily family) {
  switch (family) {
    case MapFamily::affine: return "affine";
    case MapFamily::rotation_contraction: return "rotation-contraction";
    case MapFamily::delayed_contraction: return "delayed-contraction";
    case MapFamily::multi_basin: return "multi-basin";
  }
  return "unknown";
}

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::gaussian: return "gaussian-iid";
    case NoiseKind::uniform: return "uniform-iid";
  }
  return "unknown";
}

MapFamily parse_map_family(const std::string& name) {
  for (auto f : {MapFamily::affine, MapFamily::rotation_contraction, MapFamily::delayed_contraction,
                 MapFamily::multi_basin})
    if (name == to_string(f)) return f;
  invalid("family", "unknown map family '" + name + "'");
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "gaussian") return NoiseKind::gaussian;
  if (name == "uniform") return NoiseKind::uniform;
  for (auto k : {NoiseKind::none, NoiseKind::gaussian, NoiseKind::uniform})
    if (name == to_string(k)) return k;
  invalid("kind", "unknown noise kind '" + name + "'");
}

void validate(const NoiseSpec& noise) {
  if (!(std::isfinite(noise.sigma) && noise.sigma >= 0.0)) invalid("sigma", "must be finite and >= 0");
}

RecursiveMap::RecursiveMap(MapSpec spec) : spec_(std::move(spec)) {
  if (spec_.family() == MapFamily::delayed_contraction) {
    const auto& p = std::get<DelayedParams>(spec_.params);
    fixed_point_.assign(spec_.dim, 0.0);
    for (std::size_t i = 0; i < spec_.dim; ++i) fixed_point_[i] = offset_at(p.offset, i) / (1.0 - p.lipschitz);
  }
}

RecursiveMap make_map(const MapSpec& spec) {
  validate_spec(spec);
  return RecursiveMap(spec);
}

void RecursiveMap::apply(std::span<const double> a, const SymbolicInput& input, std::size_t step,
                         std::span<double> out) const {
  const std::size_t d = spec_.dim;
  assert(a.size() == d && out.size() == d);
  switch (spec_.family()) {
    case MapFamily::affine: {
      const auto& p = std::get<AffineParams>(spec_.params);
      const std::vector<double>* extra =
          p.input_offsets.empty() ? nullptr : &p.input_offsets[input.id % p.input_offsets.size()];
      for (std::size_t i = 0; i < d; ++i) {
        double v = p.lipschitz * a[i] + offset_at(p.offset, i);
        if (extra) v += (*extra)[i];
        out[i] = v;
      }
      break;
    }
    case MapFamily::rotation_contraction: {
      const auto& p = std::get<RotationParams>(spec_.params);
      const double c = std::cos(p.theta), s = std::sin(p.theta);
      const double x = c * a[0] - s * a[1];
      const double y = s * a[0] + c * a[1];
      if (p.radius == 0.0) {
        out[0] = p.rho * x;
        out[1] = p.rho * y;
      } else {
        const double r = std::hypot(a[0], a[1]);
        const double target = p.radius + p.rho * (r - p.radius);
        if (r > 0.0) {
          out[0] = x * (target / r);
          out[1] = y * (target / r);
        } else {
          out[0] = target * c;
          out[1] = target * s;
        }
      }
      for (std::size_t i = 2; i < d; ++i) out[i] = p.rho * a[i];
      break;
    }
    case MapFamily::delayed_contraction: {
      const auto& p = std::get<DelayedParams>(spec_.params);
      if (step <= p.onset) {
        for (std::size_t i = 0; i < d; ++i)
          out[i] = fixed_point_[i] + p.pre_lipschitz * (a[i] - fixed_point_[i]);
      } else {
        for (std::size_t i = 0; i < d; ++i) out[i] = p.lipschitz * a[i] + offset_at(p.offset, i);
      }
      break;
    }
    case MapFamily::multi_basin: {
      const auto& p = std::get<MultiBasinParams>(spec_.params);
      std::size_t basin = 0;
      while (basin < p.thresholds.size() && a[p.selector] >= p.thresholds[basin]) ++basin;
      const Basin& b = p.basins[basin];
      for (std::size_t i = 0; i < d; ++i) out[i] = b.lipschitz * a[i] + offset_at(b.offset, i);
      break;
    }
  }
}

State RecursiveMap::operator()(const State& state, const SymbolicInput& input, std::size_t step) const {
  if (state.dim() != spec_.dim)
    throw Error(ErrorCode::dimension_mismatch, "state",
                "state has dimension " + std::to_string(state.dim()) + ", map expects " +
                    std::to_string(spec_.dim));
  State out(spec_.dim);
  apply(state.view(), input, step, out.view());
  return out;
}

State step(const State& state, const SymbolicInput& input, const RecursiveMap& map,
           const State& noise_draw, std::size_t step_index) {
  if (state.dim() != map.dim() || noise_draw.dim() != map.dim())
    throw Error(ErrorCode::dimension_mismatch, "state",
                "state/noise/map dimensions differ: " + std::to_string(state.dim()) + "/" +
                    std::to_string(noise_draw.dim()) + "/" + std::to_string(map.dim()));
  if (!all_finite(state.view())) throw Error(ErrorCode::non_finite, "state", "input state is not finite");
  State out = map(state, input, step_index);
  for (std::size_t i = 0; i < out.dim(); ++i) out[i] += noise_draw[i];
  return out;
}

void draw_noise(const NoiseSpec& noise, Rng& rng, std::span<double> out) {
  switch (noise.kind) {
    case NoiseKind::none:
      for (double& v : out) v = 0.0;
      break;
    case NoiseKind::gaussian:
      for (double& v : out) v = noise.sigma * rng.normal();
      break;
    case NoiseKind::uniform: {
      const double half_width = std::sqrt(3.0) * noise.sigma;
      for (double& v : out) v = rng.uniform(-half_width, half_width);
      break;
    }
  }
}

void Trajectory::validate() const {
  if (dim < 1) throw Error(ErrorCode::invalid_input, "dim", "trajectory dimension must be >= 1");
  if (states.size() != inputs.size() + 1)
    throw Error(ErrorCode::invalid_input, "states",
                "expected " + std::to_string(inputs.size() + 1) + " states for " +
                    std::to_string(inputs.size()) + " inputs, got " + std::to_string(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].dim() != dim)
      throw Error(ErrorCode::dimension_mismatch, "state",
                  "state " + std::to_string(k) + " has dimension " + std::to_string(states[k].dim()));
    if (!all_finite(states[k].view()))
      throw Error(ErrorCode::non_finite, "state", "state " + std::to_string(k) + " is not finite");
  }
}

State initial_state(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed, streams::initial_state);
  State a(dim);
  for (double& v : a.values) v = rng.uniform(-1.0, 1.0);
  return a;
}

Trajectory simulate(const MapSpec& map_spec, const NoiseSpec& noise, const InputSchedule& inputs,
                    std::size_t steps, std::uint64_t seed) {
  if (steps == 0) invalid("steps", "must be >= 1");
  if (inputs.tokens.empty()) invalid("inputs", "input schedule must be non-empty");
  validate(noise);
  const RecursiveMap f = make_map(map_spec);
  const std::size_t d = map_spec.dim;

  Trajectory t;
  t.dim = d;
  t.seed = seed;
  t.map = map_spec;
  t.noise = noise;
  t.source = TraceSource::simulated;
  t.states.reserve(steps + 1);
  t.inputs.reserve(steps);
  t.states.push_back(initial_state(d, seed));

  Rng rng(seed, streams::noise);
  std::vector<double> eps(d);
  for (std::size_t n = 0; n < steps; ++n) {
    const SymbolicInput& s = inputs.at(n);
    State next(d);
    f.apply(t.states.back().view(), s, n, next.view());
    draw_noise(noise, rng, eps);
    for (std::size_t i = 0; i < d; ++i) next[i] += eps[i];
    if (!all_finite(next.view()))
      throw Error(ErrorCode::non_finite, "state",
                  "state became non-finite at step " + std::to_string(n + 1));
    t.inputs.push_back(s);
    t.states.push_back(std::move(next));
  }
  return t;
}

}  // namespace rcxi
