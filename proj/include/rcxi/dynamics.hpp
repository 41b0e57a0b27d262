#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rcxi/rng.hpp"
#include "rcxi/state.hpp"

namespace rcxi {

enum class NoiseKind { none, gaussian, uniform };

/// Zero-mean i.i.d. additive noise. `sigma` is the per-coordinate standard
/// deviation for both kinds (the uniform kind draws from [-sqrt(3)σ, sqrt(3)σ]).
struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double sigma = 0.0;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

enum class MapFamily { affine, rotation_contraction, delayed_contraction, multi_basin };

// f(a, s) = L a + b + c[s.id mod |c|]. `input_offsets` may be empty.
struct AffineParams {
  double lipschitz = 0.5;
  std::vector<double> offset;  // empty means zero
  std::vector<std::vector<double>> input_offsets;

  friend bool operator==(const AffineParams&, const AffineParams&) = default;
};

// Rotation by theta in the (x0, x1) plane with radial update
// r' = radius + rho (r - radius); remaining coordinates are scaled by rho.
struct RotationParams {
  double rho = 0.9;
  double theta = 0.0;
  double radius = 0.0;

  friend bool operator==(const RotationParams&, const RotationParams&) = default;
};

// Expansion about a* = b / (1 - L) with factor pre_lipschitz for step <= onset,
// then the affine contraction L a + b.
struct DelayedParams {
  std::size_t onset = 0;
  double pre_lipschitz = 1.1;
  double lipschitz = 0.5;
  std::vector<double> offset;

  friend bool operator==(const DelayedParams&, const DelayedParams&) = default;
};

struct Basin {
  double lipschitz = 0.5;
  std::vector<double> offset;

  friend bool operator==(const Basin&, const Basin&) = default;
};

// Basin i is active when a[selector] lies in [thresholds[i-1], thresholds[i]).
struct MultiBasinParams {
  std::size_t selector = 0;
  std::vector<double> thresholds;
  std::vector<Basin> basins;

  friend bool operator==(const MultiBasinParams&, const MultiBasinParams&) = default;
};

struct MapSpec {
  std::size_t dim = 1;
  std::variant<AffineParams, RotationParams, DelayedParams, MultiBasinParams> params;

  MapFamily family() const noexcept { return static_cast<MapFamily>(params.index()); }

  friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

const char* to_string(MapFamily family);
const char* to_string(NoiseKind kind);
MapFamily parse_map_family(const std::string& name);
NoiseKind parse_noise_kind(const std::string& name);

void validate(const NoiseSpec& noise);

/// A validated, evaluable update function f: R^d x Σ -> R^d.
class RecursiveMap {
 public:
  std::size_t dim() const noexcept { return spec_.dim; }
  const MapSpec& spec() const noexcept { return spec_; }

  /// Writes f(state, input) at `step` into `out`; `out` must not alias `state`.
  void apply(std::span<const double> state, const SymbolicInput& input, std::size_t step,
             std::span<double> out) const;
  State operator()(const State& state, const SymbolicInput& input, std::size_t step = 0) const;

 private:
  friend RecursiveMap make_map(const MapSpec& spec);
  explicit RecursiveMap(MapSpec spec);

  MapSpec spec_;
  std::vector<double> fixed_point_;  // delayed-contraction only
};

/// Validates `spec` and returns its update function. Throws Error naming the field.
RecursiveMap make_map(const MapSpec& spec);

/// f(state, input) + noise_draw.
State step(const State& state, const SymbolicInput& input, const RecursiveMap& map,
           const State& noise_draw, std::size_t step_index = 0);

/// Fills `out` with one noise draw.
void draw_noise(const NoiseSpec& noise, Rng& rng, std::span<double> out);

/// Cyclic input schedule: step n receives tokens[n mod size].
struct InputSchedule {
  std::vector<SymbolicInput> tokens{SymbolicInput{0, {}}};

  const SymbolicInput& at(std::size_t step) const { return tokens[step % tokens.size()]; }
};

enum class TraceSource { simulated, extracted };

struct Trajectory {
  std::size_t dim = 0;
  std::vector<State> states;         // n + 1 states
  std::vector<SymbolicInput> inputs; // inputs[k] drives states[k] -> states[k+1]
  // Input recorded alongside the final state (extracted traces only).
  std::optional<SymbolicInput> trailing_input;
  std::optional<std::uint64_t> seed;
  std::optional<MapSpec> map;
  std::optional<NoiseSpec> noise;
  TraceSource source = TraceSource::simulated;
  std::optional<std::string> model_id;

  std::size_t steps() const noexcept { return inputs.size(); }
  /// Throws Error if a Trajectory invariant is broken.
  void validate() const;
};

/// Draws A0 uniformly in [-1, 1]^d from the seed's initial-state stream.
State initial_state(std::size_t dim, std::uint64_t seed);

/// Runs A_{n+1} = f(A_n, s_n) + eps_n for `steps` steps. Pure function of its arguments.
Trajectory simulate(const MapSpec& map_spec, const NoiseSpec& noise, const InputSchedule& inputs,
                    std::size_t steps, std::uint64_t seed);

}  // namespace rcxi
