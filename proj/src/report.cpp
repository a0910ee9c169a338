#include "conehol/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "conehol/errors.hpp"

namespace conehol {

namespace {

std::string number_text(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Keep a marker that the value is a float so parsing restores a double.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void dump(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      // nlohmann's default object type is a std::map, so iteration is sorted.
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        dump(v, out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += number_text(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

double number_or_nan(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

Json report_to_json(const Report& r, bool with_timing) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json d = Json::object();
    for (const auto& [k, v] : c.details) d[k] = std::isfinite(v) ? Json(v) : Json(nullptr);
    Json rec{{"name", c.name},
             {"kind", c.kind},
             {"value", std::isfinite(c.value) ? Json(c.value) : Json(nullptr)},
             {"tolerance", c.tolerance},
             {"pass", c.pass},
             {"details", d}};
    if (c.kind == "label") rec["label"] = c.label;
    if (!c.error.empty()) rec["error"] = c.error;
    if (with_timing) rec["wall_time"] = c.wall_time;
    checks.push_back(std::move(rec));
  }
  return Json{{"scenario", r.scenario_id},
              {"tool_version", r.tool_version},
              {"seed", r.seed},
              {"pass", r.pass},
              {"checks", checks}};
}

Report report_from_json(const Json& j) {
  try {
    Report r;
    r.scenario_id = j.at("scenario").get<std::string>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.pass = j.at("pass").get<bool>();
    for (const auto& c : j.at("checks")) {
      CheckRecord rec;
      rec.name = c.at("name").get<std::string>();
      rec.kind = c.at("kind").get<std::string>();
      rec.value = number_or_nan(c.at("value"));
      rec.tolerance = c.at("tolerance").get<double>();
      rec.pass = c.at("pass").get<bool>();
      if (c.contains("label")) rec.label = c.at("label").get<std::string>();
      if (c.contains("error")) rec.error = c.at("error").get<std::string>();
      if (c.contains("wall_time")) rec.wall_time = c.at("wall_time").get<double>();
      for (const auto& [k, v] : c.at("details").items()) rec.details[k] = number_or_nan(v);
      r.checks.push_back(std::move(rec));
    }
    return r;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

void emit_report(const Report& r, std::ostream& os, bool with_timing) {
  os << dump_json(report_to_json(r, with_timing));
  if (!os) throw Error("failed to write report");
}

void emit_report(const Report& r, const std::string& path, bool with_timing) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  emit_report(r, out, with_timing);
}

}  // namespace conehol
