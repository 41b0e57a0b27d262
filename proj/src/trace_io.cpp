#include "rcxi/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rcxi/error.hpp"

namespace rcxi {

using nlohmann::json;

namespace {

[[noreturn]] void format_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::format, field, what);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) format_error(where, where + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) format_error(key, "unknown field '" + key + "' in " + where);
}

double get_real(const json& j, const char* key) {
  if (!j.contains(key)) format_error(key, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) format_error(key, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_unsigned(const json& j, const char* key) {
  if (!j.contains(key)) format_error(key, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_unsigned()) format_error(key, std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> get_vector(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  const json& v = j.at(key);
  if (!v.is_array()) format_error(key, std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) format_error(key, std::string("field '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void append_double(std::string& out, double v) {
  out += format_double(v);
}

void append_state(std::string& out, const State& s) {
  out += '[';
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (i) out += ',';
    append_double(out, s[i]);
  }
  out += ']';
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

// Replaces bare NaN/Infinity tokens outside strings by a string marker so the
// rest of the record can still be inspected.
std::string mark_non_finite(std::string_view line) {
  std::string out;
  bool in_string = false, escaped = false;
  for (std::size_t i = 0; i < line.size();) {
    const char c = line[i];
    if (in_string) {
      out += c;
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      ++i;
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      ++i;
      continue;
    }
    std::size_t j = i + (c == '-' || c == '+' ? 1 : 0);
    std::size_t k = j;
    while (k < line.size() && std::isalpha(static_cast<unsigned char>(line[k]))) ++k;
    const std::string word(line.substr(j, k - j));
    if (word == "NaN" || word == "nan" || word == "Infinity" || word == "inf" || word == "Inf" ||
        word == "INF" || word == "NAN") {
      out += "\"non-finite\"";
      i = k;
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

struct ParseOutcome {
  Trajectory trajectory;
  std::vector<Violation> violations;
};

struct Collector {
  std::vector<Violation>& out;
  bool stop_at_first;

  // Returns true when parsing should stop.
  bool add(std::optional<std::size_t> record, std::optional<std::int64_t> step, std::string field,
           std::string message) {
    out.push_back({record, step, std::move(field), std::move(message)});
    return stop_at_first;
  }
};

ParseOutcome parse_impl(std::string_view text, bool stop_at_first) {
  ParseOutcome result;
  Collector c{result.violations, stop_at_first};
  Trajectory& t = result.trajectory;

  auto lines = split_lines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) {
    c.add(std::nullopt, std::nullopt, "header", "empty file");
    return result;
  }

  // Header.
  std::optional<std::size_t> dim;
  try {
    const json h = json::parse(lines[0]);
    if (!h.is_object()) {
      if (c.add(std::nullopt, std::nullopt, "header", "header line must be a JSON object")) return result;
    } else {
      for (const auto& [key, value] : h.items()) {
        static const std::set<std::string> known{"format_version", "dim",     "source",  "seed",
                                                 "model_id",       "map_spec", "noise_spec"};
        if (!known.count(key) && c.add(std::nullopt, std::nullopt, key, "unknown header field '" + key + "'"))
          return result;
      }
      if (!h.contains("format_version") || !h["format_version"].is_number_integer()) {
        if (c.add(std::nullopt, std::nullopt, "format_version", "missing or non-integer format_version"))
          return result;
      } else if (h["format_version"].get<std::int64_t>() != kTraceFormatVersion) {
        if (c.add(std::nullopt, std::nullopt, "format_version",
                  "unknown format_version " + h["format_version"].dump()))
          return result;
      }
      if (!h.contains("dim") || !h["dim"].is_number_unsigned() || h["dim"].get<std::uint64_t>() == 0) {
        if (c.add(std::nullopt, std::nullopt, "dim", "dim must be a positive integer")) return result;
      } else {
        dim = h["dim"].get<std::size_t>();
        t.dim = *dim;
      }
      if (!h.contains("source") || !h["source"].is_string() ||
          (h["source"] != "simulated" && h["source"] != "extracted")) {
        if (c.add(std::nullopt, std::nullopt, "source", "source must be \"simulated\" or \"extracted\""))
          return result;
      } else {
        t.source = h["source"] == "simulated" ? TraceSource::simulated : TraceSource::extracted;
      }
      if (h.contains("seed")) {
        if (!h["seed"].is_number_unsigned()) {
          if (c.add(std::nullopt, std::nullopt, "seed", "seed must be a non-negative integer")) return result;
        } else {
          t.seed = h["seed"].get<std::uint64_t>();
        }
      }
      if (h.contains("model_id")) {
        if (!h["model_id"].is_string()) {
          if (c.add(std::nullopt, std::nullopt, "model_id", "model_id must be a string")) return result;
        } else {
          t.model_id = h["model_id"].get<std::string>();
        }
      }
      if (h.contains("map_spec")) {
        try {
          MapSpec spec = h["map_spec"].get<MapSpec>();
          make_map(spec);
          if (dim && spec.dim != *dim) {
            if (c.add(std::nullopt, std::nullopt, "map_spec", "map_spec.dim differs from header dim"))
              return result;
          }
          t.map = std::move(spec);
        } catch (const std::exception& e) {
          if (c.add(std::nullopt, std::nullopt, "map_spec", e.what())) return result;
        }
      }
      if (h.contains("noise_spec")) {
        try {
          NoiseSpec noise = h["noise_spec"].get<NoiseSpec>();
          validate(noise);
          t.noise = noise;
        } catch (const std::exception& e) {
          if (c.add(std::nullopt, std::nullopt, "noise_spec", e.what())) return result;
        }
      }
    }
  } catch (const json::exception& e) {
    if (c.add(std::nullopt, std::nullopt, "header", std::string("malformed header JSON: ") + e.what()))
      return result;
  }

  // Records.
  const std::size_t count = lines.size() - 1;
  if (count == 0 && c.add(std::nullopt, std::nullopt, "records", "trace has no records")) return result;
  std::optional<std::int64_t> previous_step;
  std::size_t previous_index = 0;
  for (std::size_t r = 0; r < count; ++r) {
    const std::string_view line = lines[r + 1];
    const bool last = r + 1 == count;
    json rec;
    bool non_finite_token = false;
    try {
      rec = json::parse(line);
    } catch (const json::exception&) {
      try {
        rec = json::parse(mark_non_finite(line));
        non_finite_token = true;
      } catch (const json::exception& e) {
        if (c.add(r, std::nullopt, "record", std::string("malformed record JSON: ") + e.what())) return result;
        t.states.emplace_back();
        continue;
      }
    }
    if (!rec.is_object()) {
      if (c.add(r, std::nullopt, "record", "record must be a JSON object")) return result;
      t.states.emplace_back();
      continue;
    }
    std::optional<std::int64_t> step;
    for (const auto& [key, value] : rec.items()) {
      if (key != "step" && key != "state" && key != "input_id" && key != "input_text" &&
          c.add(r, std::nullopt, key, "unknown record field '" + key + "'"))
        return result;
    }
    if (!rec.contains("step") || !rec["step"].is_number_integer()) {
      if (c.add(r, std::nullopt, "step", "missing or non-integer step")) return result;
    } else {
      step = rec["step"].get<std::int64_t>();
      if (!previous_step) {
        if (*step != 0 && c.add(r, step, "step", "first step must be 0, got " + std::to_string(*step)))
          return result;
      } else if (*step <= *previous_step) {
        if (c.add(r, step, "step",
                  "steps not increasing: record " + std::to_string(previous_index) + " has step " +
                      std::to_string(*previous_step) + ", record " + std::to_string(r) + " has step " +
                      std::to_string(*step)))
          return result;
      } else if (*step != *previous_step + 1) {
        if (c.add(r, step, "step",
                  "step gap between record " + std::to_string(previous_index) + " (step " +
                      std::to_string(*previous_step) + ") and record " + std::to_string(r) + " (step " +
                      std::to_string(*step) + ")"))
          return result;
      }
      previous_step = step;
      previous_index = r;
    }

    State state;
    if (!rec.contains("state") || !rec["state"].is_array()) {
      if (c.add(r, step, "state", "missing state array")) return result;
    } else {
      bool finite = !non_finite_token;
      bool numeric = true;
      for (const auto& x : rec["state"]) {
        if (x.is_number()) {
          const double v = x.get<double>();
          if (!std::isfinite(v)) finite = false;
          state.values.push_back(v);
        } else if (x.is_string() && x == "non-finite") {
          finite = false;
          state.values.push_back(std::nan(""));
        } else {
          numeric = false;
        }
      }
      if (!numeric) {
        if (c.add(r, step, "state", "state entries must be numbers")) return result;
      } else if (!finite) {
        if (c.add(r, step, "state", "non-finite value in state")) return result;
      } else if (dim && state.dim() != *dim) {
        if (c.add(r, step, "state",
                  "state length " + std::to_string(state.dim()) + " differs from header dim " +
                      std::to_string(*dim)))
          return result;
      }
    }
    t.states.push_back(std::move(state));

    std::optional<SymbolicInput> input;
    if (rec.contains("input_id")) {
      if (!rec["input_id"].is_number_unsigned()) {
        if (c.add(r, step, "input_id", "input_id must be a non-negative integer")) return result;
      } else {
        input = SymbolicInput{rec["input_id"].get<std::uint64_t>(), {}};
      }
    } else if (!last) {
      if (c.add(r, step, "input_id", "missing input_id")) return result;
    }
    if (rec.contains("input_text")) {
      if (!rec["input_text"].is_string()) {
        if (c.add(r, step, "input_text", "input_text must be a string")) return result;
      } else if (input) {
        input->text = rec["input_text"].get<std::string>();
      } else if (c.add(r, step, "input_text", "input_text without input_id")) {
        return result;
      }
    }
    if (last)
      t.trailing_input = input;
    else
      t.inputs.push_back(input.value_or(SymbolicInput{}));
  }
  return result;
}

std::string file_error_path(const std::filesystem::path& p) { return p.string(); }

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value))
    throw Error(ErrorCode::non_finite, "value", "cannot serialize a non-finite value");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

const char* to_string(TraceSource source) {
  return source == TraceSource::simulated ? "simulated" : "extracted";
}

void to_json(json& j, const NoiseSpec& noise) {
  j = json{{"kind", to_string(noise.kind)}, {"sigma", noise.sigma}};
}

void from_json(const json& j, NoiseSpec& noise) {
  check_keys(j, {"kind", "sigma"}, "noise_spec");
  if (!j.contains("kind") || !j["kind"].is_string()) format_error("kind", "noise kind must be a string");
  noise.kind = parse_noise_kind(j["kind"].get<std::string>());
  noise.sigma = j.contains("sigma") ? get_real(j, "sigma") : 0.0;
}

void to_json(json& j, const MapSpec& spec) {
  j = json{{"family", to_string(spec.family())}, {"dim", spec.dim}};
  std::visit(
      [&j](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, AffineParams>) {
          j["lipschitz"] = p.lipschitz;
          if (!p.offset.empty()) j["offset"] = p.offset;
          if (!p.input_offsets.empty()) j["input_offsets"] = p.input_offsets;
        } else if constexpr (std::is_same_v<P, RotationParams>) {
          j["rho"] = p.rho;
          j["theta"] = p.theta;
          j["radius"] = p.radius;
        } else if constexpr (std::is_same_v<P, DelayedParams>) {
          j["onset"] = p.onset;
          j["pre_lipschitz"] = p.pre_lipschitz;
          j["lipschitz"] = p.lipschitz;
          if (!p.offset.empty()) j["offset"] = p.offset;
        } else {
          j["selector"] = p.selector;
          j["thresholds"] = p.thresholds;
          json basins = json::array();
          for (const auto& b : p.basins) {
            json jb{{"lipschitz", b.lipschitz}};
            if (!b.offset.empty()) jb["offset"] = b.offset;
            basins.push_back(jb);
          }
          j["basins"] = basins;
        }
      },
      spec.params);
}

void from_json(const json& j, MapSpec& spec) {
  if (!j.is_object()) format_error("map_spec", "map spec must be a JSON object");
  if (!j.contains("family") || !j["family"].is_string()) format_error("family", "map family must be a string");
  spec.dim = get_unsigned(j, "dim");
  switch (parse_map_family(j["family"].get<std::string>())) {
    case MapFamily::affine: {
      check_keys(j, {"family", "dim", "lipschitz", "offset", "input_offsets"}, "map_spec");
      AffineParams p;
      p.lipschitz = get_real(j, "lipschitz");
      p.offset = get_vector(j, "offset");
      if (j.contains("input_offsets")) {
        if (!j["input_offsets"].is_array()) format_error("input_offsets", "input_offsets must be an array");
        for (const auto& row : j["input_offsets"]) p.input_offsets.push_back(get_vector(json{{"r", row}}, "r"));
      }
      spec.params = std::move(p);
      break;
    }
    case MapFamily::rotation_contraction: {
      check_keys(j, {"family", "dim", "rho", "theta", "radius"}, "map_spec");
      RotationParams p;
      p.rho = get_real(j, "rho");
      p.theta = get_real(j, "theta");
      p.radius = j.contains("radius") ? get_real(j, "radius") : 0.0;
      spec.params = p;
      break;
    }
    case MapFamily::delayed_contraction: {
      check_keys(j, {"family", "dim", "onset", "pre_lipschitz", "lipschitz", "offset"}, "map_spec");
      DelayedParams p;
      p.onset = get_unsigned(j, "onset");
      p.pre_lipschitz = get_real(j, "pre_lipschitz");
      p.lipschitz = get_real(j, "lipschitz");
      p.offset = get_vector(j, "offset");
      spec.params = std::move(p);
      break;
    }
    case MapFamily::multi_basin: {
      check_keys(j, {"family", "dim", "selector", "thresholds", "basins"}, "map_spec");
      MultiBasinParams p;
      p.selector = j.contains("selector") ? get_unsigned(j, "selector") : 0;
      p.thresholds = get_vector(j, "thresholds");
      if (!j.contains("basins") || !j["basins"].is_array()) format_error("basins", "basins must be an array");
      for (const auto& jb : j["basins"]) {
        check_keys(jb, {"lipschitz", "offset"}, "basin");
        p.basins.push_back(Basin{get_real(jb, "lipschitz"), get_vector(jb, "offset")});
      }
      spec.params = std::move(p);
      break;
    }
  }
}

std::string describe(const Violation& v) {
  std::string s;
  s += v.record ? "record " + std::to_string(*v.record) : std::string("header");
  if (v.step) s += " (step " + std::to_string(*v.step) + ")";
  s += ": " + v.field + ": " + v.message;
  return s;
}

std::string serialize_trace(const Trajectory& t) {
  t.validate();
  json header{{"format_version", kTraceFormatVersion}, {"dim", t.dim}, {"source", to_string(t.source)}};
  if (t.seed) header["seed"] = *t.seed;
  if (t.model_id) header["model_id"] = *t.model_id;
  if (t.map) header["map_spec"] = *t.map;
  if (t.noise) header["noise_spec"] = *t.noise;

  std::string out = header.dump();
  out += '\n';
  out.reserve(out.size() + t.states.size() * (t.dim * 22 + 40));
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    out += "{\"step\":";
    out += std::to_string(k);
    out += ",\"state\":";
    append_state(out, t.states[k]);
    const SymbolicInput* input = k < t.inputs.size() ? &t.inputs[k] : (t.trailing_input ? &*t.trailing_input : nullptr);
    if (input) {
      out += ",\"input_id\":";
      out += std::to_string(input->id);
      if (!input->text.empty()) {
        out += ",\"input_text\":";
        out += json(input->text).dump();
      }
    }
    out += "}\n";
  }
  return out;
}

void write_trace(const Trajectory& trajectory, const std::filesystem::path& path) {
  write_file(path, serialize_trace(trajectory));
}

Trajectory parse_trace(std::string_view text) {
  ParseOutcome outcome = parse_impl(text, true);
  if (!outcome.violations.empty()) {
    const Violation& v = outcome.violations.front();
    throw Error(ErrorCode::format, v.field, "invalid trace: " + describe(v));
  }
  return std::move(outcome.trajectory);
}

Trajectory read_trace(const std::filesystem::path& path) { return parse_trace(read_file(path)); }

std::vector<Violation> validate_trace_text(std::string_view text) {
  try {
    return parse_impl(text, false).violations;
  } catch (const std::exception& e) {
    return {Violation{std::nullopt, std::nullopt, "file", std::string("unreadable content: ") + e.what()}};
  }
}

std::vector<Violation> validate_trace(const std::filesystem::path& path) {
  return validate_trace_text(read_file(path));
}

std::string serialize_vocab(const Vocab& vocab) {
  vocab.validate();
  std::string out;
  for (const auto& e : vocab.entries) {
    out += "{\"id\":";
    out += std::to_string(e.id);
    out += ",\"text\":";
    out += json(e.text).dump();
    out += ",\"embedding\":";
    append_state(out, e.embedding);
    out += "}\n";
  }
  return out;
}

void write_vocab(const Vocab& vocab, const std::filesystem::path& path) {
  write_file(path, serialize_vocab(vocab));
}

Vocab parse_vocab(std::string_view text) {
  Vocab v;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      format_error("vocab", "line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
    }
    try {
      check_keys(j, {"id", "text", "embedding"}, "vocab entry");
      VocabEntry e;
      e.id = get_unsigned(j, "id");
      if (j.contains("text")) {
        if (!j["text"].is_string()) format_error("text", "text must be a string");
        e.text = j["text"].get<std::string>();
      }
      if (!j.contains("embedding")) format_error("embedding", "missing embedding");
      e.embedding = State(get_vector(j, "embedding"));
      if (v.entries.empty()) v.dim = e.embedding.dim();
      v.entries.push_back(std::move(e));
    } catch (const Error& e) {
      format_error(e.field(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (v.entries.empty()) format_error("vocab", "vocab file has no entries");
  v.validate();
  return v;
}

Vocab read_vocab(const std::filesystem::path& path) { return parse_vocab(read_file(path)); }

void to_json(json& j, const SimulationConfig& config) {
  json inputs = json::array();
  for (const auto& tok : config.inputs.tokens) {
    if (tok.text.empty())
      inputs.push_back(tok.id);
    else
      inputs.push_back(json{{"id", tok.id}, {"text", tok.text}});
  }
  j = json{{"map", config.map}, {"noise", config.noise}, {"inputs", inputs}, {"steps", config.steps},
           {"seed", config.seed}};
}

SimulationConfig parse_simulation_config(const json& j) {
  check_keys(j, {"map", "noise", "inputs", "steps", "seed"}, "config");
  SimulationConfig c;
  if (!j.contains("map")) format_error("map", "config needs a 'map' object");
  c.map = j["map"].get<MapSpec>();
  make_map(c.map);
  if (j.contains("noise")) {
    c.noise = j["noise"].get<NoiseSpec>();
    validate(c.noise);
  }
  if (j.contains("inputs")) {
    if (!j["inputs"].is_array() || j["inputs"].empty()) format_error("inputs", "inputs must be a non-empty array");
    c.inputs.tokens.clear();
    for (const auto& tok : j["inputs"]) {
      if (tok.is_number_unsigned()) {
        c.inputs.tokens.push_back({tok.get<std::uint64_t>(), {}});
      } else {
        check_keys(tok, {"id", "text"}, "input");
        SymbolicInput s{get_unsigned(tok, "id"), {}};
        if (tok.contains("text")) s.text = tok["text"].get<std::string>();
        c.inputs.tokens.push_back(std::move(s));
      }
    }
  }
  if (j.contains("steps")) c.steps = get_unsigned(j, "steps");
  if (j.contains("seed")) c.seed = get_unsigned(j, "seed");
  return c;
}

SimulationConfig read_simulation_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    format_error("config", path.string() + ": malformed JSON: " + e.what());
  }
  return parse_simulation_config(j);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, file_error_path(path), "cannot read file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, path.string(), "cannot write file " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::io, path.string(), "failed writing file " + path.string());
}

}  // namespace rcxi
