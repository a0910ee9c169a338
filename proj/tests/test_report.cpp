#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "conehol/errors.hpp"
#include "conehol/report.hpp"
#include "doctest.h"

using namespace conehol;

namespace {

ScenarioConfig from_text(const std::string& text) { return scenario_from_json(Json::parse(text)); }

std::string emit(const Report& r, bool timing = false) {
  std::ostringstream os;
  emit_report(r, os, timing);
  return os.str();
}

Report without_times(Report r) {
  for (auto& c : r.checks) c.wall_time = 0.0;
  return r;
}

const char* kMinimal =
    R"({"family": "cone", "base": {"family": "cc-catalog", "entry": "sphere2"}, "checks": ["flatness"]})";

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("minimal config loads and the cone over the sphere is flat") {
    const ScenarioConfig c = from_text(kMinimal);
    CHECK(c.metric.family == "cone");
    REQUIRE(c.checks.size() == 1);
    const Report r = run_checks(c);
    CHECK(r.pass);
    CHECK(r.checks[0].value < 1e-6);
  }

  TEST_CASE("load errors") {
    try {
      from_text(R"({"family": "cone", "base": {"family": "cc-catalog", "entry": "sphere2"}, "checks": ["flatnes"]})");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("flatnes") != std::string::npos);
    }
    CHECK_THROWS_AS(from_text(R"({"family": "nope", "checks": []})"), ConfigError);
    try {
      from_text(R"({"family": "doubly-warped", "f1": "cos(s", "a": 0, "b": 1, "checks": []})");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 5);
      CHECK(std::string(e.what()).find("at offset 5") != std::string::npos);
    }
    CHECK_THROWS_AS(from_text(R"({"family": "model-plane", "k": 1, "checks": [],
                                  "grid": {"ranges": [[-1, 1], [0, 1]], "count": 8}})"),
                    ConfigError);
    CHECK_THROWS_AS(resolve_grid(from_text(R"({"family": "model-plane", "k": 1, "checks": [],
                                  "grid": {"ranges": [[-1, 1], [0, 1]], "count": 8}})")),
                    ConfigError);
    const auto path = std::filesystem::temp_directory_path() / "conehol_bad.json";
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_scenario(path), ConfigError);
    CHECK_THROWS_AS(load_scenario(path.string() + ".missing"), ConfigError);
  }

  TEST_CASE("empty check list passes") {
    const Report r = run_checks(from_text(R"({"family": "model-plane", "k": 0, "checks": []})"));
    CHECK(r.pass);
    CHECK(r.checks.empty());
    CHECK(report_to_json(r).at("checks").empty());
  }

  TEST_CASE("a failing check makes the report fail") {
    const Report r = run_checks(from_text(R"({"family": "model-plane", "k": 1, "checks": ["flatness"]})"));
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.checks[0].pass);
    CHECK(r.checks[0].error.empty());
  }

  TEST_CASE("a throwing check is recorded and the run continues") {
    const Report r = run_checks(from_text(R"({"family": "model-plane", "k": 0,
                                              "checks": ["oracle-connection", "flatness"]})"));
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.checks[0].error.empty());
    CHECK(std::isnan(r.checks[0].value));
    CHECK(r.checks[1].pass);
    CHECK(emit(r).find("\"value\": null") != std::string::npos);
  }

  TEST_CASE("holonomy dimension of the three-dimensional trig chart") {
    const Report r = run_checks(from_text(R"({
      "family": "double-polar", "variant": "trig",
      "factor1": {"family": "line", "coord": "u"}, "factor2": {"family": "line", "coord": "w"},
      "grid": {"points": [[0.7, 0.2, -0.3]]},
      "checks": [{"name": "holonomy-dimension", "expect": 3}]})"));
    CHECK(r.pass);
    CHECK(r.checks[0].value == 3.0);
  }

  TEST_CASE("round trip and determinism") {
    const ScenarioConfig c = from_text(R"({
      "family": "cone", "base": {"family": "cc-catalog", "entry": "desitter2"}, "seed": 9, "t_max": 1.0,
      "grid": {"kind": "random", "count": 6, "ranges": [[0.6, 1.6], [-0.8, 0.8], [-1, 1]]},
      "checks": ["flatness", {"name": "holonomy-classification", "expect": "trivial"}, "reachability"]})");
    const Report a = run_checks(c);
    const Report b = run_checks(c);
    CHECK(emit(a) == emit(b));
    CHECK(report_from_json(Json::parse(emit(a, true))) == a);
    CHECK(report_from_json(Json::parse(emit(a))) == without_times(a));

    Report odd = a;
    odd.checks[0].value = 1.0 / 3.0;
    odd.checks[0].details["tiny"] = 1e-300;
    odd.checks[0].details["whole"] = 4.0;
    CHECK(report_from_json(Json::parse(emit(odd, true))) == odd);
    CHECK(emit(odd).find("0.33333333333333331") != std::string::npos);
  }

  TEST_CASE("stable key order and optional wall time") {
    Report r;
    r.scenario_id = "x";
    CheckRecord rec;
    rec.name = "flatness";
    rec.pass = true;
    rec.wall_time = 0.5;
    r.checks.push_back(rec);
    const std::string plain = emit(r);
    CHECK(plain.find("wall_time") == std::string::npos);
    CHECK(plain.find("\"checks\"") < plain.find("\"pass\""));
    CHECK(plain.find("\"pass\"") < plain.find("\"scenario\""));
    std::ostringstream os;
    emit_report(r, os, true);
    CHECK(os.str().find("\"wall_time\": 0.5") != std::string::npos);
    CHECK_THROWS_AS(report_from_json(Json::parse(R"({"scenario": "x"})")), ConfigError);
  }

  TEST_CASE("tolerance overrides") {
    ScenarioConfig c = from_text(R"({"family": "model-plane", "k": 1,
                                     "checks": [{"name": "flatness", "tol": 2.0}, "flatness"]})");
    Report r = run_checks(c);
    CHECK(r.checks[0].pass);
    CHECK_FALSE(r.checks[1].pass);
    RunOptions opt;
    opt.tol = 5.0;
    r = run_checks(c, opt);
    CHECK(r.pass);
    CHECK(default_tolerance("isometry") == 1e-9);
    CHECK_THROWS_AS(default_tolerance("nope"), ConfigError);
  }
}
