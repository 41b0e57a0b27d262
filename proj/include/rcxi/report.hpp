#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcxi/convergence.hpp"
#include "rcxi/glyph.hpp"
#include "rcxi/lipschitz.hpp"
#include "rcxi/reducibility.hpp"
#include "rcxi/tension.hpp"

namespace rcxi {

/// A report entry that may be unavailable; `status` is "ok" or the reason.
template <class T>
struct Section {
  std::optional<T> value;
  std::string status = "ok";

  static Section failed(std::string why) { return Section{std::nullopt, std::move(why)}; }
  bool ok() const noexcept { return value.has_value(); }
};

struct AttractorSummary {
  std::size_t k = 0;
  std::vector<State> centroids;
  std::vector<std::size_t> sizes;
  std::vector<double> dispersion;
  double silhouette = 0.0;
  // Distances from the final 10% of states to the attractor sample.
  double tail_distance_median = 0.0;
  double tail_distance_p95 = 0.0;
};

struct PcaSummary {
  std::vector<double> explained_variance;
  double torus_score = 0.0;
  bool toroidal = false;  // torus_score >= kTorusThreshold
};

struct AnalysisReport {
  nlohmann::json config;  // fully resolved parameters
  nlohmann::json seeds;
  TensionSummary tension;
  Section<MomentBoundReport> moment_bound;
  Section<PersistenceReport> persistence;
  Section<LipschitzEstimate> lipschitz;
  Section<DistConvergenceReport> convergence;
  Section<AttractorSummary> attractors;
  Section<PcaSummary> pca;
  Section<ReducibilityReport> reducibility;
  Section<AnchorReport> anchor;
  std::map<std::string, bool> checks;
  std::vector<std::string> required_checks;
  bool all_checks_passed = false;
};

nlohmann::json to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& j);

/// Evaluates `checks` from the sections and the conjunction over `required`
/// (every available check when `required` is empty).
void evaluate_checks(AnalysisReport& report, const std::vector<std::string>& required);

}  // namespace rcxi
