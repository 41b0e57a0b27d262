#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rcxi/dynamics.hpp"
#include "rcxi/glyph.hpp"

namespace rcxi {

inline constexpr int kTraceFormatVersion = 1;

/// Shortest decimal that parses back to the same double, with ".0" appended
/// when the shortest form has no fraction or exponent (so -0.0 survives).
/// Non-finite values are rejected.
std::string format_double(double value);

void to_json(nlohmann::json& j, const NoiseSpec& noise);
void from_json(const nlohmann::json& j, NoiseSpec& noise);
void to_json(nlohmann::json& j, const MapSpec& spec);
void from_json(const nlohmann::json& j, MapSpec& spec);

const char* to_string(TraceSource source);

/// One TraceFile invariant violation. `record` is the 0-based record index
/// (empty for the header line); `step` is the record's step when readable.
struct Violation {
  std::optional<std::size_t> record;
  std::optional<std::int64_t> step;
  std::string field;
  std::string message;
};

std::string describe(const Violation& v);

std::string serialize_trace(const Trajectory& trajectory);
void write_trace(const Trajectory& trajectory, const std::filesystem::path& path);

/// Parses a trace; throws Error(format) describing the first violation.
Trajectory parse_trace(std::string_view text);
Trajectory read_trace(const std::filesystem::path& path);

/// Never throws on malformed content; an unreadable file throws Error(io).
std::vector<Violation> validate_trace_text(std::string_view text);
std::vector<Violation> validate_trace(const std::filesystem::path& path);

std::string serialize_vocab(const Vocab& vocab);
void write_vocab(const Vocab& vocab, const std::filesystem::path& path);
Vocab parse_vocab(std::string_view text);
Vocab read_vocab(const std::filesystem::path& path);

/// Simulation parameters as stored in a config file:
/// {"map": {...}, "noise": {...}, "inputs": [ids or {"id", "text"}], "steps": n, "seed": s}.
struct SimulationConfig {
  MapSpec map;
  NoiseSpec noise;
  InputSchedule inputs;
  std::size_t steps = 1000;
  std::uint64_t seed = 0;
};

void to_json(nlohmann::json& j, const SimulationConfig& config);
SimulationConfig parse_simulation_config(const nlohmann::json& j);
SimulationConfig read_simulation_config(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace rcxi
