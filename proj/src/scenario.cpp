#include "conehol/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "conehol/errors.hpp"
#include "conehol/sampling.hpp"

namespace conehol {

namespace {

constexpr double kDefaultLo = 0.2;
constexpr double kDefaultHi = 1.4;
constexpr int kDefaultCount = 32;

BuiltMetric build_metric_in(const Json& spec, const std::string& ctx);

Expr parse_in(const std::string& text, const std::string& ctx) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    throw ParseError("syntax error in " + ctx + " (\"" + text + "\"): " + msg.substr(0, msg.rfind(" at offset")),
                     e.offset());
  }
}

std::string where(const std::string& ctx, const std::string& key) { return ctx.empty() ? key : ctx + "." + key; }

const Json& require(const Json& j, const std::string& key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where(ctx, key) + " is required");
  return j.at(key);
}

std::string get_string(const Json& j, const std::string& key, const std::string& ctx,
                       std::optional<std::string> def = std::nullopt) {
  if (!j.contains(key)) {
    if (def) return *def;
    throw ConfigError(where(ctx, key) + " is required");
  }
  if (!j.at(key).is_string()) throw ConfigError(where(ctx, key) + " must be a string");
  return j.at(key).get<std::string>();
}

double get_number(const Json& j, const std::string& key, const std::string& ctx, std::optional<double> def = std::nullopt) {
  if (!j.contains(key)) {
    if (def) return *def;
    throw ConfigError(where(ctx, key) + " is required");
  }
  const Json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  // Allow named constants and simple arithmetic, e.g. "pi/2".
  if (v.is_string()) return eval_scalar(parse_in(v.get<std::string>(), where(ctx, key)), {{"pi", M_PI}, {"inf", INFINITY}});
  throw ConfigError(where(ctx, key) + " must be a number");
}

int get_sign(const Json& j, const std::string& key, const std::string& ctx, int def) {
  const double v = get_number(j, key, ctx, def);
  if (v != 1.0 && v != -1.0) throw ConfigError(where(ctx, key) + " must be +1 or -1");
  return static_cast<int>(v);
}

std::vector<std::string> get_strings(const Json& v, const std::string& ctx) {
  if (!v.is_array()) throw ConfigError(ctx + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError(ctx + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::optional<MetricField> optional_factor(const Json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return build_metric_in(j.at(key), where(ctx, key)).metric;
}

}  // namespace

const std::vector<std::string>& spec_family_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v = family_ids();
    v.push_back("line");
    v.push_back("model-plane");
    return v;
  }();
  return ids;
}

namespace {

BuiltMetric build_metric_in(const Json& spec, const std::string& ctx) {
  if (!spec.is_object()) throw ConfigError(ctx + " must be an object");
  const std::string family = get_string(spec, "family", ctx);
  const auto& ids = spec_family_ids();
  if (std::find(ids.begin(), ids.end(), family) == ids.end())
    throw ConfigError("unknown metric family '" + family + "' in " + where(ctx, "family"));
  BuiltMetric b;
  b.family = family;
  auto from_warped = [&](WarpedMetric w) {
    b.metric = std::move(w.metric);
    b.warped = std::move(w.spec);
    b.k = w.k;
  };
  if (family == "cone") {
    const BuiltMetric base = build_metric_in(require(spec, "base", ctx), where(ctx, "base"));
    b.cone_c = get_number(spec, "c", ctx, 1.0);
    b.metric = make_cone(base.metric, b.cone_c);
    b.cone_base = base.metric;
    if (b.metric.constant_curvature) b.k = b.metric.constant_curvature;
  } else if (family == "doubly-warped") {
    WarpedSpec s;
    s.epsilon = get_sign(spec, "epsilon", ctx, 1);
    s.f1 = parse_in(get_string(spec, "f1", ctx, "1"), where(ctx, "f1"));
    s.f2 = parse_in(get_string(spec, "f2", ctx, "1"), where(ctx, "f2"));
    s.a = get_number(spec, "a", ctx);
    s.b = get_number(spec, "b", ctx);
    s.coord = get_string(spec, "coord", ctx, "s");
    s.g1 = optional_factor(spec, "factor1", ctx);
    s.g2 = optional_factor(spec, "factor2", ctx);
    b.metric = make_doubly_warped(s);
    b.warped = s;
  } else if (family == "cc-catalog") {
    CatalogOptions o;
    o.g1 = optional_factor(spec, "factor1", ctx);
    o.g2 = optional_factor(spec, "factor2", ctx);
    o.sign1 = get_sign(spec, "sign1", ctx, 1);
    o.sign2 = get_sign(spec, "sign2", ctx, 1);
    from_warped(make_cc_catalog_entry(get_string(spec, "entry", ctx), get_sign(spec, "epsilon", ctx, 1), o));
  } else if (family == "horospherical") {
    from_warped(make_horospherical(get_sign(spec, "epsilon", ctx, 1),
                                   build_metric_in(require(spec, "base", ctx), where(ctx, "base")).metric));
  } else if (family == "cosh-example") {
    from_warped(make_example_cosh(build_metric_in(require(spec, "fiber", ctx), where(ctx, "fiber")).metric));
  } else if (family == "horosphere-base") {
    from_warped(make_horosphere_base(build_metric_in(require(spec, "fiber", ctx), where(ctx, "fiber")).metric));
  } else if (family == "para-sasaki-example") {
    const auto u = get_strings(require(spec, "u", ctx), where(ctx, "u"));
    for (std::size_t i = 0; i < u.size(); ++i) parse_in(u[i], where(ctx, "u[" + std::to_string(i) + "]"));
    b.para_sasaki = make_para_sasaki_example(u);
    b.metric = b.para_sasaki->metric;
  } else if (family == "pp-wave-chart") {
    b.metric = make_pp_wave_cone_chart(build_metric_in(require(spec, "fiber", ctx), where(ctx, "fiber")).metric);
  } else if (family == "double-polar") {
    const std::string v = get_string(spec, "variant", ctx, "trig");
    if (v != "trig" && v != "hyperbolic") throw ConfigError(where(ctx, "variant") + " must be 'trig' or 'hyperbolic'");
    from_warped(make_double_polar(v == "trig" ? DoublePolar::Trig : DoublePolar::Hyperbolic,
                                  get_sign(spec, "epsilon", ctx, 1), optional_factor(spec, "factor1", ctx),
                                  optional_factor(spec, "factor2", ctx)));
  } else if (family == "explicit") {
    const auto coords = get_strings(require(spec, "coords", ctx), where(ctx, "coords"));
    const Json& comps = require(spec, "components", ctx);
    if (!comps.is_array() || comps.size() != coords.size())
      throw ConfigError(where(ctx, "components") + " must be a " + std::to_string(coords.size()) + "x" +
                        std::to_string(coords.size()) + " array");
    std::vector<std::vector<std::string>> c;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string rc = where(ctx, "components[" + std::to_string(i) + "]");
      c.push_back(get_strings(comps[i], rc));
      if (c.back().size() != coords.size()) throw ConfigError(rc + " has the wrong length");
      for (std::size_t j = 0; j < coords.size(); ++j) parse_in(c[i][j], rc + "[" + std::to_string(j) + "]");
    }
    const Json& sig = require(spec, "signature", ctx);
    if (!sig.is_array() || sig.size() != 2 || !sig[0].is_number_integer() || !sig[1].is_number_integer())
      throw ConfigError(where(ctx, "signature") + " must be [neg, pos]");
    Box box;
    if (spec.contains("box")) {
      const Json& bx = spec.at("box");
      if (!bx.is_array() || bx.size() != coords.size()) throw ConfigError(where(ctx, "box") + " needs one [lo, hi] per coordinate");
      for (std::size_t i = 0; i < bx.size(); ++i) {
        const std::string bc = where(ctx, "box[" + std::to_string(i) + "]");
        if (!bx[i].is_array() || bx[i].size() != 2) throw ConfigError(bc + " must be [lo, hi]");
        Json pair{{"lo", bx[i][0]}, {"hi", bx[i][1]}};
        box.lo.push_back(get_number(pair, "lo", bc));
        box.hi.push_back(get_number(pair, "hi", bc));
      }
    }
    b.metric = make_explicit(get_string(spec, "name", ctx, "explicit"), coords, c,
                             Signature{sig[0].get<int>(), sig[1].get<int>()}, box);
    if (spec.contains("k")) b.k = get_number(spec, "k", ctx);
    if (b.k) b.metric.constant_curvature = b.k;
  } else if (family == "line") {
    b.metric = line_metric(get_string(spec, "coord", ctx, "t"), get_sign(spec, "sign", ctx, 1));
  } else if (family == "model-plane") {
    const double k = get_number(spec, "k", ctx);
    if (k != -1.0 && k != 0.0 && k != 1.0) throw ConfigError(where(ctx, "k") + " must be -1, 0 or 1");
    b.metric = model_plane(static_cast<int>(k));
    b.k = k;
  }
  if (!b.k && b.metric.constant_curvature) b.k = b.metric.constant_curvature;
  return b;
}

}  // namespace

BuiltMetric build_metric(const Json& spec) { return build_metric_in(spec, "metric"); }

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids{
      "flatness",          "constant-curvature",      "cc-conditions",       "oracle-connection",
      "oracle-curvature",  "holonomy-dimension",      "holonomy-classification", "annihilated-vectors",
      "parallel-field",    "parallel-distribution",   "geodesic-oracle",     "completeness-probe",
      "gallot-H",          "reachability",            "para-sasaki",         "cone-J",
      "para-kahler",       "alpha-split",             "isometry",            "contact-form",
      "three-sasaki",      "nabla-R"};
  return ids;
}

namespace {

// Parameters holding expression strings (single strings, arrays, or nested
// arrays of strings) that are parsed at load time.
const std::set<std::string> kExpressionKeys{"field", "fields", "V1", "V2", "J", "map", "inverse", "alpha", "reeb"};

void preparse(const Json& v, const std::string& ctx) {
  if (v.is_string()) {
    parse_in(v.get<std::string>(), ctx);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) preparse(v[i], ctx + "[" + std::to_string(i) + "]");
  } else {
    throw ConfigError(ctx + " must hold expression strings");
  }
}

CheckSpec parse_check(const Json& c, std::size_t index) {
  const std::string ctx = "checks[" + std::to_string(index) + "]";
  CheckSpec s;
  if (c.is_string()) {
    s.name = c.get<std::string>();
  } else if (c.is_object()) {
    s.name = get_string(c, "name", ctx);
    if (c.contains("tol")) s.tol = get_number(c, "tol", ctx);
    s.params = c;
    s.params.erase("name");
    s.params.erase("tol");
  } else {
    throw ConfigError(ctx + " must be a check name or an object");
  }
  const auto& ids = check_ids();
  if (std::find(ids.begin(), ids.end(), s.name) == ids.end())
    throw ConfigError("unknown check '" + s.name + "' in " + ctx);
  for (const auto& [key, value] : s.params.items())
    if (kExpressionKeys.count(key)) preparse(value, ctx + "." + key);
  if (s.params.contains("target")) build_metric_in(s.params.at("target"), ctx + ".target");
  return s;
}

GridSpec parse_grid(const Json& g, int dim) {
  GridSpec s;
  if (g.is_null()) {
    s.ranges.assign(static_cast<std::size_t>(dim), {kDefaultLo, kDefaultHi});
    s.count = kDefaultCount;
    return s;
  }
  if (!g.is_object()) throw ConfigError("grid must be an object");
  if (g.contains("points")) {
    const Json& pts = g.at("points");
    if (!pts.is_array() || pts.empty()) throw ConfigError("grid.points must be a non-empty array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string pc = "grid.points[" + std::to_string(i) + "]";
      if (!pts[i].is_array() || static_cast<int>(pts[i].size()) != dim)
        throw ConfigError(pc + " must have " + std::to_string(dim) + " coordinates");
      Point p;
      for (std::size_t k = 0; k < pts[i].size(); ++k) p.push_back(get_number(Json{{"x", pts[i][k]}}, "x", pc));
      s.points.push_back(std::move(p));
    }
    return s;
  }
  s.kind = get_string(g, "kind", "grid", "halton");
  if (s.kind != "halton" && s.kind != "tensor" && s.kind != "random")
    throw ConfigError("grid.kind must be halton, tensor or random");
  s.count = static_cast<int>(get_number(g, "count", "grid", kDefaultCount));
  if (s.count < 1) throw ConfigError("grid.count must be positive");
  if (g.contains("ranges")) {
    const Json& r = g.at("ranges");
    if (!r.is_array() || static_cast<int>(r.size()) != dim)
      throw ConfigError("grid.ranges needs one [lo, hi] per coordinate (" + std::to_string(dim) + ")");
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string rc = "grid.ranges[" + std::to_string(i) + "]";
      if (!r[i].is_array() || r[i].size() != 2) throw ConfigError(rc + " must be [lo, hi]");
      const double lo = get_number(Json{{"v", r[i][0]}}, "v", rc), hi = get_number(Json{{"v", r[i][1]}}, "v", rc);
      if (!(lo <= hi)) throw ConfigError(rc + " is empty");
      s.ranges.emplace_back(lo, hi);
    }
  } else {
    s.ranges.assign(static_cast<std::size_t>(dim), {kDefaultLo, kDefaultHi});
  }
  return s;
}

}  // namespace

std::vector<Point> resolve_grid(const ScenarioConfig& c, int count_override) {
  const MetricField& m = c.metric.metric;
  if (!c.grid.points.empty()) {
    for (std::size_t i = 0; i < c.grid.points.size(); ++i)
      if (!m.in_domain(c.grid.points[i]))
        throw ConfigError("grid point " + std::to_string(i) + " lies outside the domain of " + m.name());
    return c.grid.points;
  }
  const int count = count_override > 0 ? count_override : c.grid.count;
  Vector lo, hi;
  bool degenerate = false;
  for (const auto& [a, b] : c.grid.ranges) {
    lo.push_back(a);
    hi.push_back(b);
    degenerate = degenerate || a == b;
  }
  std::vector<Point> pts;
  if (degenerate) {
    // Pinned coordinates: sample the free ones and fix the rest.
    Vector flo = lo, fhi = hi;
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (lo[i] == hi[i]) fhi[i] = flo[i] + 1.0;
    pts = halton_points(flo, fhi, count);
    for (auto& p : pts)
      for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] == hi[i]) p[i] = lo[i];
  } else if (c.grid.kind == "tensor") {
    int per = 1;
    while (std::pow(per + 1, static_cast<double>(lo.size())) <= count) ++per;
    pts = tensor_grid(lo, hi, per);
  } else if (c.grid.kind == "random") {
    pts = random_points(lo, hi, count, c.seed);
  } else {
    pts = halton_points(lo, hi, count);
  }
  std::vector<Point> inside = in_domain(m, pts);
  if (inside.size() != pts.size() && !c.grid.defaulted)
    throw ConfigError("grid ranges leave the domain of " + m.name() + " (" +
                      std::to_string(pts.size() - inside.size()) + " of " + std::to_string(pts.size()) +
                      " points outside)");
  if (inside.empty()) throw ConfigError("no grid point lies in the domain of " + m.name());
  return inside;
}

ScenarioConfig scenario_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  static const std::set<std::string> known{"id", "metric", "family", "checks", "grid", "seed", "t_max", "geodesic",
                                           "description"};
  ScenarioConfig c;
  c.id = get_string(j, "id", "", "scenario");
  // The metric description is either under "metric" or inline at the top level.
  if (j.contains("metric")) {
    c.metric_spec = j.at("metric");
    for (const auto& [key, v] : j.items())
      if (!known.count(key)) throw ConfigError("unknown scenario key '" + key + "'");
  } else {
    c.metric_spec = j;
    for (const char* key : {"id", "checks", "grid", "seed", "t_max", "geodesic", "description"}) c.metric_spec.erase(key);
  }
  c.metric = build_metric(c.metric_spec);
  if (j.contains("checks")) {
    const Json& checks = j.at("checks");
    if (!checks.is_array()) throw ConfigError("checks must be an array");
    for (std::size_t i = 0; i < checks.size(); ++i) c.checks.push_back(parse_check(checks[i], i));
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("t_max")) {
    const Json& t = j.at("t_max");
    if (t.is_number()) {
      c.t_max.push_back(t.get<double>());
    } else if (t.is_array()) {
      for (const auto& v : t) {
        if (!v.is_number()) throw ConfigError("t_max must hold numbers");
        c.t_max.push_back(v.get<double>());
      }
    } else {
      throw ConfigError("t_max must be a number or an array");
    }
    for (double v : c.t_max)
      if (!(v > 0.0)) throw ConfigError("t_max values must be positive");
  }
  if (j.contains("geodesic")) c.geodesic = j.at("geodesic");
  c.grid = parse_grid(j.contains("grid") ? j.at("grid") : Json(), c.metric.metric.dim());
  c.grid.defaulted = !j.contains("grid") || !j.at("grid").contains("ranges");
  resolve_grid(c);
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace conehol
