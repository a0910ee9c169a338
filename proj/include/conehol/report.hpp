#pragma once

// Running the checks of a scenario and serializing the outcome.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conehol/scenario.hpp"

namespace conehol {

inline constexpr const char* kToolVersion = "0.1.0";

struct CheckRecord {
  std::string name;
  std::string kind = "residual";  // residual | value | label
  double value = 0.0;             // residual or measured value
  std::string label;              // kind == label
  double tolerance = 0.0;
  bool pass = false;
  std::string error;  // set when the check threw
  double wall_time = 0.0;
  std::map<std::string, double> details;

  bool operator==(const CheckRecord&) const = default;
};

struct Report {
  std::string scenario_id;
  std::string tool_version = kToolVersion;
  std::uint64_t seed = 0;
  bool pass = true;
  std::vector<CheckRecord> checks;

  bool operator==(const Report&) const = default;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;  // replaces the scenario seed
  std::optional<double> tol;          // replaces every tolerance
  int grid = 0;                       // > 0 replaces the grid count
  bool timing = false;                // record wall times
};

/// Run every check; a check that throws is recorded as failed with its
/// message and the run continues.
Report run_checks(const ScenarioConfig& c, const RunOptions& opt = {});

/// Run a single check (exposed for the acceptance driver and tests).
CheckRecord run_check(const ScenarioConfig& c, const CheckSpec& check, const std::vector<Point>& grid,
                      std::uint64_t seed, const RunOptions& opt = {});

/// Default tolerance of a check id.
double default_tolerance(const std::string& check);

/// Sorted keys, numbers with 17 significant digits, non-finite numbers as null.
/// Wall times are written only when `with_timing` is set.
Json report_to_json(const Report& r, bool with_timing = false);
Report report_from_json(const Json& j);
void emit_report(const Report& r, std::ostream& os, bool with_timing = false);
void emit_report(const Report& r, const std::string& path, bool with_timing = false);

/// Deterministic JSON text: sorted keys, 2-space indent, %.17g numbers.
std::string dump_json(const Json& j);

}  // namespace conehol
