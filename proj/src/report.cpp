#include "rcxi/report.hpp"

#include "rcxi/error.hpp"

namespace rcxi {

using nlohmann::json;

namespace {

json states_json(const std::vector<State>& states) {
  json a = json::array();
  for (const auto& s : states) a.push_back(s.values);
  return a;
}

std::vector<State> states_from(const json& j) {
  std::vector<State> out;
  for (const auto& s : j) out.emplace_back(s.get<std::vector<double>>());
  return out;
}

template <class T, class F>
json section_json(const Section<T>& s, F&& fields) {
  json j = s.value ? fields(*s.value) : json::object();
  j["status"] = s.status;
  return j;
}

template <class T, class F>
Section<T> section_from(const json& j, F&& parse) {
  Section<T> s;
  s.status = j.at("status").get<std::string>();
  if (s.status == "ok") s.value = parse(j);
  return s;
}

json tension_json(const TensionSummary& t) {
  return {{"count", t.count}, {"burn_in", t.burn_in}, {"mean", t.mean},      {"mean_sq", t.mean_sq},
          {"min", t.min},     {"max", t.max},         {"trend_slope", t.trend_slope}};
}

TensionSummary tension_from(const json& j) {
  TensionSummary t;
  t.count = j.at("count");
  t.burn_in = j.at("burn_in");
  t.mean = j.at("mean");
  t.mean_sq = j.at("mean_sq");
  t.min = j.at("min");
  t.max = j.at("max");
  t.trend_slope = j.at("trend_slope");
  return t;
}

}  // namespace

json to_json(const AnalysisReport& r) {
  json j;
  j["config"] = r.config;
  j["seeds"] = r.seeds;
  j["tension_summary"] = tension_json(r.tension);
  j["moment_bound"] = section_json(r.moment_bound, [](const MomentBoundReport& m) {
    return json{{"window_mean_sq", m.window_mean_sq}, {"bound", m.bound}, {"satisfied", m.satisfied}, {"window", m.window}};
  });
  j["persistence"] = section_json(r.persistence, [](const PersistenceReport& p) {
    return json{{"persistent", p.persistent},
                {"longest_start", p.longest_start},
                {"longest_length", p.longest_length},
                {"threshold", p.threshold},
                {"min_run", p.min_run}};
  });
  j["lipschitz"] = section_json(r.lipschitz, [](const LipschitzEstimate& l) {
    return json{{"L_hat", l.l_hat},
                {"onset_estimate", l.onset_estimate ? json(*l.onset_estimate) : json(nullptr)},
                {"probes", l.probes},
                {"discarded", l.discarded},
                {"per_probe_ratios", l.per_probe_ratios}};
  });
  j["convergence"] = section_json(r.convergence, [](const DistConvergenceReport& c) {
    return json{{"statistic", c.statistic},       {"p_value", c.p_value}, {"converged", c.converged},
                {"window", c.window},             {"alpha", c.alpha},     {"permutations", c.permutations},
                {"points_per_window", c.points_per_window}};
  });
  j["attractors"] = section_json(r.attractors, [](const AttractorSummary& a) {
    return json{{"k", a.k},
                {"centroids", states_json(a.centroids)},
                {"sizes", a.sizes},
                {"dispersion", a.dispersion},
                {"silhouette", a.silhouette},
                {"tail_distance_median", a.tail_distance_median},
                {"tail_distance_p95", a.tail_distance_p95}};
  });
  j["pca"] = section_json(r.pca, [](const PcaSummary& p) {
    return json{{"explained_variance", p.explained_variance}, {"torus_score", p.torus_score}, {"toroidal", p.toroidal}};
  });
  j["reducibility"] = section_json(r.reducibility, [](const ReducibilityReport& s) {
    return json{{"r_squared", s.r_squared}, {"sse", s.sse}, {"sst", s.sst}, {"samples", s.samples}, {"symbols", s.symbols}};
  });
  j["anchor"] = section_json(r.anchor, [](const AnchorReport& a) {
    return json{{"nearest_id", a.nearest_id},
                {"nearest_distance", a.nearest_distance},
                {"delta", a.delta},
                {"anchored", a.anchored},
                {"input_id", a.input_id ? json(*a.input_id) : json(nullptr)},
                {"input_distance", a.input_distance ? json(*a.input_distance) : json(nullptr)}};
  });
  j["checks"] = r.checks;
  j["required_checks"] = r.required_checks;
  j["all_checks_passed"] = r.all_checks_passed;
  return j;
}

AnalysisReport report_from_json(const json& j) {
  try {
    AnalysisReport r;
    r.config = j.at("config");
    r.seeds = j.at("seeds");
    r.tension = tension_from(j.at("tension_summary"));
    r.moment_bound = section_from<MomentBoundReport>(j.at("moment_bound"), [](const json& s) {
      return MomentBoundReport{s.at("window_mean_sq"), s.at("bound"), s.at("satisfied"), s.at("window")};
    });
    r.persistence = section_from<PersistenceReport>(j.at("persistence"), [](const json& s) {
      return PersistenceReport{s.at("persistent"), s.at("longest_start"), s.at("longest_length"),
                               s.at("threshold"), s.at("min_run")};
    });
    r.lipschitz = section_from<LipschitzEstimate>(j.at("lipschitz"), [](const json& s) {
      LipschitzEstimate l;
      l.l_hat = s.at("L_hat");
      if (!s.at("onset_estimate").is_null()) l.onset_estimate = s.at("onset_estimate").get<std::size_t>();
      l.probes = s.at("probes");
      l.discarded = s.at("discarded");
      l.per_probe_ratios = s.at("per_probe_ratios").get<std::vector<double>>();
      return l;
    });
    r.convergence = section_from<DistConvergenceReport>(j.at("convergence"), [](const json& s) {
      DistConvergenceReport c;
      c.statistic = s.at("statistic");
      c.p_value = s.at("p_value");
      c.converged = s.at("converged");
      c.window = s.at("window");
      c.alpha = s.at("alpha");
      c.permutations = s.at("permutations");
      c.points_per_window = s.at("points_per_window");
      return c;
    });
    r.attractors = section_from<AttractorSummary>(j.at("attractors"), [](const json& s) {
      AttractorSummary a;
      a.k = s.at("k");
      a.centroids = states_from(s.at("centroids"));
      a.sizes = s.at("sizes").get<std::vector<std::size_t>>();
      a.dispersion = s.at("dispersion").get<std::vector<double>>();
      a.silhouette = s.at("silhouette");
      a.tail_distance_median = s.at("tail_distance_median");
      a.tail_distance_p95 = s.at("tail_distance_p95");
      return a;
    });
    r.pca = section_from<PcaSummary>(j.at("pca"), [](const json& s) {
      return PcaSummary{s.at("explained_variance").get<std::vector<double>>(), s.at("torus_score"), s.at("toroidal")};
    });
    r.reducibility = section_from<ReducibilityReport>(j.at("reducibility"), [](const json& s) {
      return ReducibilityReport{s.at("r_squared"), s.at("sse"), s.at("sst"), s.at("samples"), s.at("symbols")};
    });
    r.anchor = section_from<AnchorReport>(j.at("anchor"), [](const json& s) {
      AnchorReport a;
      a.nearest_id = s.at("nearest_id");
      a.nearest_distance = s.at("nearest_distance");
      a.delta = s.at("delta");
      a.anchored = s.at("anchored");
      if (!s.at("input_id").is_null()) a.input_id = s.at("input_id").get<std::uint64_t>();
      if (!s.at("input_distance").is_null()) a.input_distance = s.at("input_distance").get<double>();
      return a;
    });
    r.checks = j.at("checks").get<std::map<std::string, bool>>();
    r.required_checks = j.at("required_checks").get<std::vector<std::string>>();
    r.all_checks_passed = j.at("all_checks_passed");
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::format, "report", std::string("malformed report: ") + e.what());
  }
}

void evaluate_checks(AnalysisReport& r, const std::vector<std::string>& required) {
  r.checks.clear();
  if (r.moment_bound.ok()) r.checks["moment_bound"] = r.moment_bound.value->satisfied;
  if (r.convergence.ok()) r.checks["convergence"] = r.convergence.value->converged;
  if (r.lipschitz.ok()) r.checks["contraction"] = r.lipschitz.value->l_hat < 1.0;
  if (r.persistence.ok()) r.checks["persistence"] = r.persistence.value->persistent;
  if (r.anchor.ok()) r.checks["anchored"] = r.anchor.value->anchored;

  r.required_checks.clear();
  if (required.empty()) {
    for (const auto& [name, passed] : r.checks) r.required_checks.push_back(name);
  } else {
    r.required_checks = required;
  }
  r.all_checks_passed = true;
  for (const auto& name : r.required_checks) {
    const auto it = r.checks.find(name);
    if (it == r.checks.end() || !it->second) r.all_checks_passed = false;
  }
}

}  // namespace rcxi
