#pragma once

// Scenario configuration: a metric spec, a grid and a list of named checks,
// loaded from JSON and validated up front.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "conehol/geometry.hpp"
#include "conehol/metric_zoo.hpp"
#include "json.hpp"

namespace conehol {

using Json = nlohmann::json;

/// A metric built from a spec, with whatever construction data later checks
/// may need.
struct BuiltMetric {
  std::string family;
  MetricField metric;
  std::optional<WarpedSpec> warped;        // warped families
  std::optional<double> k;                 // attached constant curvature
  std::optional<MetricField> cone_base;    // family "cone"
  double cone_c = 1.0;
  std::optional<ParaSasakiExample> para_sasaki;  // family "para-sasaki-example"
};

/// Families accepted in specs: the metric-zoo families plus "line" and
/// "model-plane" for small factors.
const std::vector<std::string>& spec_family_ids();

BuiltMetric build_metric(const Json& spec);

const std::vector<std::string>& check_ids();

struct CheckSpec {
  std::string name;
  std::optional<double> tol;
  Json params = Json::object();
};

struct GridSpec {
  std::string kind = "halton";  // halton | tensor | random
  std::vector<std::pair<double, double>> ranges;
  int count = 0;
  std::vector<Point> points;  // explicit points, used as given
  bool defaulted = false;     // default box: points outside the domain are dropped
};

struct ScenarioConfig {
  std::string id = "scenario";
  Json metric_spec;
  BuiltMetric metric;
  std::vector<CheckSpec> checks;
  GridSpec grid;
  std::uint64_t seed = 0;
  std::vector<double> t_max;
  Json geodesic = Json::object();  // optional initial state for the geodesic subcommand
};

/// Throws ConfigError (unknown ids, bad shapes, grid outside the domain) or
/// ParseError (malformed expressions, with the byte offset).
ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig scenario_from_json(const Json& j);

/// Grid points for the scenario metric; every point lies in the domain.
/// `count_override` > 0 replaces the configured count.
std::vector<Point> resolve_grid(const ScenarioConfig& c, int count_override = 0);

}  // namespace conehol
