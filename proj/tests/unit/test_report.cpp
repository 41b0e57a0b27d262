#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "rcxi/analysis.hpp"
#include "rcxi/trace_io.hpp"

using namespace rcxi;
using namespace rcxi::test;
using nlohmann::json;

namespace {

AnalysisConfig quick_config() {
  AnalysisConfig c;
  c.permutations = 99;
  c.probes = 8;
  c.lipschitz_steps = 200;
  c.vocab_size = 200;
  return c;
}

std::size_t csv_rows(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("report json round trips with no field loss") {
  const auto t = simulate(rotation(4, 0.95, 0.6, 1.0), gaussian(0.02), schedule({1, 2}), 3000, 1);
  const auto a = analyze(t, quick_config());
  const json j = to_json(a.report);
  const AnalysisReport back = report_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(to_json(report_from_json(json::parse(j.dump(2)))).dump(2) == j.dump(2));
  for (const char* key : {"config", "seeds", "tension_summary", "moment_bound", "persistence", "lipschitz",
                          "convergence", "attractors", "pca", "reducibility", "anchor", "checks",
                          "required_checks", "all_checks_passed"})
    CHECK(j.contains(key));
  CHECK(j["lipschitz"]["status"] == "ok");
  CHECK(j["pca"]["status"] == "ok");
  CHECK(j["config"]["permutations"] == 99);
  CHECK(j["seeds"]["trace"] == 1);
}

TEST_CASE("analysis is deterministic") {
  const auto t = simulate(affine(3, 0.6), gaussian(0.1), {}, 2000, 5);
  CHECK(to_json(analyze(t, quick_config()).report).dump() == to_json(analyze(t, quick_config()).report).dump());
}

TEST_CASE("evaluate_checks") {
  AnalysisReport r;
  r.moment_bound.value = MomentBoundReport{1.0, 2.0, true, 10};
  r.convergence.value = DistConvergenceReport{};
  r.convergence.value->converged = false;
  r.lipschitz = Section<LipschitzEstimate>::failed("unavailable: trace has no map_spec");
  r.persistence = Section<PersistenceReport>::failed("invalid_input: x");
  r.anchor = Section<AnchorReport>::failed("invalid_input: y");
  evaluate_checks(r, {});
  CHECK(r.checks.size() == 2);
  CHECK(r.checks.at("moment_bound"));
  CHECK_FALSE(r.checks.at("convergence"));
  CHECK_FALSE(r.all_checks_passed);
  evaluate_checks(r, {"moment_bound"});
  CHECK(r.all_checks_passed);
  evaluate_checks(r, {"moment_bound", "contraction"});
  CHECK_FALSE(r.all_checks_passed);  // an unavailable required check fails
}

TEST_CASE("malformed report is a format error") {
  const auto t = simulate(affine(2, 0.5), gaussian(0.1), {}, 500, 0);
  json j = to_json(analyze(t, quick_config()).report);
  json missing = j;
  missing.erase("anchor");
  CHECK_RCXI_ERROR(report_from_json(missing), ErrorCode::format);
  json wrong = j;
  wrong["tension_summary"]["mean"] = "x";
  CHECK_RCXI_ERROR(report_from_json(wrong), ErrorCode::format);
  CHECK_RCXI_ERROR(report_from_json(json::array()), ErrorCode::format);
}

TEST_CASE("sections fail independently") {
  // Extracted-style trace: no map spec, tiny length.
  Trajectory t;
  t.dim = 2;
  t.source = TraceSource::extracted;
  for (int k = 0; k < 12; ++k) t.states.push_back(State{std::cos(k * 0.5), std::sin(k * 0.5)});
  t.inputs.assign(11, SymbolicInput{1, "x"});
  const auto a = analyze(t, quick_config());
  CHECK(a.report.lipschitz.status == "unavailable: trace has no map_spec");
  CHECK_FALSE(a.report.pca.ok());  // fewer than 20 points for the torus score
  CHECK(a.projection.has_value());
  CHECK(a.report.anchor.ok());
}

TEST_CASE("constant trajectory: flat tension, PCA rejected as zero-variance") {
  Trajectory t;
  t.dim = 3;
  t.states.assign(400, State{1.0, 2.0, 3.0});
  t.inputs.assign(399, SymbolicInput{});
  const auto a = analyze(t, quick_config());
  CHECK(a.report.tension.max == 0.0);
  CHECK(a.report.pca.status.rfind("degenerate", 0) == 0);
  CHECK_FALSE(a.projection.has_value());

  TempDir dir;
  emit_report(a, dir.path());
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "xi.svg"));
  CHECK_FALSE(std::filesystem::exists(dir / "pca.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "pca.svg"));
  CHECK(csv_rows(dir / "xi_trace.csv") == 400);
  std::ifstream in(dir / "xi_trace.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "step,xi");
  CHECK(first == "0,0.0");
  const json j = json::parse(read_file(dir / "report.json"));
  CHECK(j["pca"]["status"].get<std::string>().find("zero-variance") != std::string::npos);
}

TEST_CASE("emit_report writes every artifact") {
  const auto t = simulate(rotation(4, 0.95, 0.6, 1.0), gaussian(0.02), {}, 2000, 1);
  const auto a = analyze(t, quick_config());
  TempDir dir;
  emit_report(a, dir / "nested" / "out");
  for (const char* f : {"report.json", "xi_trace.csv", "xi.svg", "pca.csv", "pca.svg"})
    CHECK(std::filesystem::exists(dir / "nested" / "out" / f));
  CHECK(csv_rows(dir / "nested" / "out" / "pca.csv") == 1 + 2001 - a.projection_offset);
  CHECK(report_from_json(json::parse(read_file(dir / "nested" / "out" / "report.json"))).all_checks_passed ==
        a.report.all_checks_passed);
  const auto svg = read_file(dir / "nested" / "out" / "pca.svg");
  CHECK(svg.rfind("<svg", 0) == 0);

  // An existing file where the directory should go.
  write_file(dir / "blocker", "x");
  CHECK_RCXI_ERROR(emit_report(a, dir / "blocker"), ErrorCode::io);
}
