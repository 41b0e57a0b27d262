#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rcxi/attractors.hpp"
#include "rcxi/pca.hpp"
#include "rcxi/report.hpp"

namespace rcxi {

struct AnalysisConfig {
  std::optional<std::size_t> burn_in;  // default: 10% of the states
  std::optional<std::size_t> window;   // default: 20% of the states
  double alpha = 0.05;
  std::size_t permutations = 500;
  std::size_t max_points = 500;
  std::size_t k_max = 8;
  std::size_t encoder_window = 256;
  std::uint64_t encoder_seed = 0;
  std::uint64_t seed = 0;
  std::size_t probes = 32;
  std::size_t lipschitz_steps = 1000;
  std::optional<double> bound;             // epsilon + eta
  std::optional<double> tension_threshold; // default: 10th percentile of xi after burn-in
  std::size_t min_run = 50;
  std::optional<double> delta;             // default: 5th percentile of vocab distances
  std::size_t vocab_size = 1000;           // synthetic vocab when none is supplied
  std::vector<std::string> require;        // empty: every available check
  std::string trace_name;
  std::string vocab_name;
};

struct Analysis {
  AnalysisReport report;
  TensionTrace tension;
  std::optional<Projection> projection;  // of states [projection_offset, end)
  std::size_t projection_offset = 0;
};

using ProgressSink = std::function<void(const std::string& event)>;

Analysis analyze(const Trajectory& trajectory, const AnalysisConfig& config,
                 const std::optional<Vocab>& vocab = std::nullopt, const ProgressSink& progress = {});

/// Writes report.json, xi_trace.csv, pca.csv, pca.svg and xi.svg into `out_dir`.
/// pca.csv / pca.svg are skipped when the projection was rejected.
void emit_report(const Analysis& analysis, const std::filesystem::path& out_dir);

}  // namespace rcxi
