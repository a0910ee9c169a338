// Command-line front end: runs scenario files and prints JSON reports.
//
// Exit codes: 0 when every check passes, 1 when a check fails or a
// computation breaks down, 2 on configuration or parse errors.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "conehol/errors.hpp"
#include "conehol/geodesic.hpp"
#include "conehol/random.hpp"
#include "conehol/report.hpp"
#include "conehol/tensor_ops.hpp"
#include "conehol/transport.hpp"

namespace {

using namespace conehol;

struct Shared {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  int grid = 0;
  bool timing = false;
};

void add_shared(CLI::App* cmd, Shared& s, bool needs_scenario = true) {
  auto* opt = cmd->add_option("--scenario", s.scenario, "scenario JSON file");
  if (needs_scenario) opt->required();
  cmd->add_option("--out", s.out, "write output here instead of stdout");
  cmd->add_option("--seed", s.seed, "override the scenario seed");
  cmd->add_option("--tol", s.tol, "override every check tolerance");
  cmd->add_option("--grid", s.grid, "override the grid point count")->check(CLI::PositiveNumber);
}

void write_out(const Shared& s, const std::string& text) {
  if (s.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(s.out);
  if (!f || !(f << text)) throw Error("cannot write '" + s.out + "'");
}

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json point_json(const Point& p) {
  Json a = Json::array();
  for (double x : p) a.push_back(num(x));
  return a;
}

int cmd_verify(const Shared& s) {
  const ScenarioConfig c = load_scenario(s.scenario);
  RunOptions opt;
  opt.seed = s.seed;
  opt.tol = s.tol;
  opt.grid = s.grid;
  opt.timing = s.timing;
  const Report r = run_checks(c, opt);
  write_out(s, dump_json(report_to_json(r, s.timing)));
  for (const auto& rec : r.checks)
    std::cerr << (rec.pass ? "PASS " : "FAIL ") << rec.name
              << (rec.error.empty() ? "" : " (" + rec.error + ")") << "\n";
  return r.pass ? 0 : 1;
}

int cmd_curvature(const Shared& s) {
  const ScenarioConfig c = load_scenario(s.scenario);
  const auto grid = resolve_grid(c, s.grid);
  const MetricField& m = c.metric.metric;
  Json pts = Json::array();
  double worst = 0.0;
  for (const auto& p : grid) {
    const Curvature R = riemann(m, p);
    const CurvatureFit fit = best_constant_curvature(R);
    worst = std::max(worst, R.max_abs());
    pts.push_back(Json{{"point", point_json(p)},
                       {"max_abs_R", num(R.max_abs())},
                       {"best_kappa", num(fit.kappa)},
                       {"kappa_residual", num(fit.residual)},
                       {"symmetry_residual", num(curvature_symmetry_residual(R))},
                       {"bianchi_residual", num(bianchi_residual(R))}});
  }
  write_out(s, dump_json(Json{{"scenario", c.id},
                              {"metric", m.name()},
                              {"coords", m.coords()},
                              {"max_abs_R", num(worst)},
                              {"points", pts}}));
  return 0;
}

int cmd_holonomy(const Shared& s, const std::vector<double>& at) {
  const ScenarioConfig c = load_scenario(s.scenario);
  const MetricField& m = c.metric.metric;
  Point p;
  if (at.empty()) {
    p = resolve_grid(c, s.grid).front();
  } else {
    p = at;
    if (static_cast<int>(p.size()) != m.dim() || !m.in_domain(p))
      throw ConfigError("--point must be a domain point with " + std::to_string(m.dim()) + " coordinates");
  }
  SpanOptions so;
  so.seed = s.seed.value_or(c.seed);
  if (s.tol) so.rank_tol = *s.tol;
  const HolonomySpan span = lie_closure(ambrose_singer_span(m, p, so));
  ScanOptions sc;
  sc.seed = so.seed;
  const ScanResult scan = invariant_subspace_scan(span, sc);
  const AnnihilatedReport ann = annihilated_vectors(span);
  Json subs = Json::array();
  for (const auto& sub : scan.subspaces)
    subs.push_back(Json{{"dim", sub.dim},
                        {"isotropic", sub.isotropic},
                        {"nondegenerate", sub.nondegenerate},
                        {"invariance_residual", num(sub.invariance_residual)},
                        {"origin", sub.origin}});
  Json kernel = Json::array();
  for (const auto& k : ann.kernel) kernel.push_back(Json{{"vector", point_json(k.v)}, {"causal", k.causal}});
  write_out(s, dump_json(Json{{"scenario", c.id},
                              {"point", point_json(p)},
                              {"span_dim", span.dim()},
                              {"skewness_residual", num(skewness_residual(span))},
                              {"classification", to_string(scan.label)},
                              {"invariant_subspaces", subs},
                              {"annihilated", kernel}}));
  return 0;
}

int cmd_geodesic(const Shared& s, const std::string& csv, double t_max_flag, int steps) {
  const ScenarioConfig c = load_scenario(s.scenario);
  const MetricField& m = c.metric.metric;
  Point x;
  Vector v;
  const Json& g = c.geodesic;
  try {
    if (g.contains("x")) x = g.at("x").get<std::vector<double>>();
    if (g.contains("v")) v = g.at("v").get<std::vector<double>>();
  } catch (const Json::exception&) {
    throw ConfigError("geodesic.x and geodesic.v must be arrays of numbers");
  }
  if (x.empty()) x = resolve_grid(c, s.grid).front();
  if (v.empty()) {
    Rng rng(s.seed.value_or(c.seed));
    v.resize(x.size());
    for (auto& e : v) e = rng.normal();
  }
  if (x.size() != static_cast<std::size_t>(m.dim()) || v.size() != x.size())
    throw ConfigError("geodesic initial state has the wrong dimension");
  double t_max = t_max_flag > 0 ? t_max_flag : (c.t_max.empty() ? 1.0 : c.t_max.front());
  if (g.contains("t_max") && t_max_flag <= 0) t_max = g.at("t_max").get<double>();
  if (steps <= 0) steps = g.contains("steps") ? g.at("steps").get<int>() : 1000;
  const auto res = integrate_geodesic(m, GeodesicState::at(m, x, v), t_max, steps);
  if (!csv.empty()) {
    std::ofstream f(csv);
    if (!f) throw Error("cannot write '" + csv + "'");
    write_trajectory_csv(f, res, m.coords());
  }
  write_out(s, dump_json(Json{{"scenario", c.id},
                              {"event", to_string(res.event)},
                              {"t_end", num(res.t_end)},
                              {"energy_drift", num(res.energy_drift)},
                              {"steps_taken", res.steps_taken},
                              {"final_point", point_json(res.samples.back().x)}}));
  return 0;
}

int cmd_list(const Shared& s) {
  write_out(s, dump_json(Json{{"families", spec_family_ids()}, {"checks", check_ids()}}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification toolkit for metric cones and warped products"};
  app.set_version_flag("--version", std::string(conehol::kToolVersion));
  app.require_subcommand(1);

  Shared s;
  std::string csv;
  double t_max = 0.0;
  int steps = 0;
  std::vector<double> at;

  auto* verify = app.add_subcommand("verify", "run every check of a scenario and print the report");
  add_shared(verify, s);
  verify->add_flag("--timing", s.timing, "include per-check wall times");
  auto* curvature = app.add_subcommand("curvature", "curvature summary on the scenario grid");
  add_shared(curvature, s);
  auto* holonomy = app.add_subcommand("holonomy", "holonomy algebra estimate at a point");
  add_shared(holonomy, s);
  holonomy->add_option("--point", at, "base point (defaults to the first grid point)")->delimiter(',');
  auto* geodesic = app.add_subcommand("geodesic", "integrate one geodesic");
  add_shared(geodesic, s);
  geodesic->add_option("--csv", csv, "trajectory CSV: t, coordinates, velocity, energy");
  geodesic->add_option("--t-max", t_max, "parameter length");
  geodesic->add_option("--steps", steps, "nominal RK4 steps");
  auto* list = app.add_subcommand("list-metrics", "list metric families and check ids");
  add_shared(list, s, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) return cmd_verify(s);
    if (*curvature) return cmd_curvature(s);
    if (*holonomy) return cmd_holonomy(s, at);
    if (*geodesic) return cmd_geodesic(s, csv, t_max, steps);
    return cmd_list(s);
  } catch (const conehol::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const conehol::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
