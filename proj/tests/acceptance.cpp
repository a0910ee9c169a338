// Acceptance driver: one PASS/FAIL line per criterion.
//
//   conehol_acceptance          run every criterion
//   conehol_acceptance 7 12     run the listed criteria
//
// The exit code is non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "conehol/geodesic.hpp"
#include "conehol/metric_zoo.hpp"
#include "conehol/random.hpp"
#include "conehol/report.hpp"
#include "conehol/sampling.hpp"
#include "conehol/structure.hpp"
#include "conehol/tensor_ops.hpp"
#include "conehol/transport.hpp"

using namespace conehol;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream notes;

  void require(bool ok, const std::string& what, double value) {
    pass = pass && ok;
    notes << (notes.tellp() > 0 ? "; " : "") << what << "=" << value << (ok ? "" : " [x]");
  }
  template <typename T>
  void info(const std::string& what, const T& value) {
    notes << (notes.tellp() > 0 ? "; " : "") << what << "=" << value;
  }
};

// First `count` Halton points of the box that lie in the domain.
std::vector<Point> domain_points(const MetricField& m, const Vector& lo, const Vector& hi, int count) {
  std::vector<Point> out;
  for (const auto& p : halton_points(lo, hi, 8 * count))
    if (m.in_domain(p) && static_cast<int>(out.size()) < count) out.push_back(p);
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

MetricField flat_chart(int n) {
  std::vector<std::string> coords;
  std::vector<std::vector<std::string>> c(static_cast<std::size_t>(n), std::vector<std::string>(static_cast<std::size_t>(n), "0"));
  for (int i = 0; i < n; ++i) {
    coords.push_back("x" + std::to_string(i));
    c[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = "1";
  }
  return make_explicit("flat", coords, c, {0, n}, Box{});
}

MetricField trig_base() { return make_double_polar(DoublePolar::Trig, 1, line_metric("u"), line_metric("w")).metric; }

WarpedSpec random_spec(Rng& rng) {
  static const char* fs[] = {"cosh(s)", "exp(0.3*s)", "2+sin(s)", "1+s^2", "cos(s)", "sinh(s)"};
  WarpedSpec spec;
  spec.epsilon = rng.uniform() < 0.5 ? 1 : -1;
  spec.f1 = parse(fs[static_cast<int>(rng.uniform() * 6)]);
  spec.f2 = parse(fs[static_cast<int>(rng.uniform() * 6)]);
  spec.a = 0.05;
  spec.b = 1.5;
  auto factor = [&]() -> MetricField {
    const double u = rng.uniform();
    if (u < 0.3) return line_metric("t", rng.uniform() < 0.5 ? 1 : -1);
    if (u < 0.65) return model_plane(1);
    return model_plane(-1);
  };
  spec.g1 = factor();
  spec.g2 = factor();
  return spec;
}

// 1. Cones with c = 1 over curvature-1 bases are flat.
void flat_cone(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const char* id : {"sphere2", "sphere3"}) {
    const MetricField cone = make_cone(make_cc_catalog_entry(id, 1).metric);
    const int n = cone.dim();
    Vector lo(static_cast<std::size_t>(n), 0.2), hi(static_cast<std::size_t>(n), 2.8);
    lo[0] = 0.3;
    const auto grid = domain_points(cone, lo, hi, 100);
    double mx = 0.0;
    for (const auto& p : grid) mx = std::max(mx, riemann(cone, p).max_abs());
    o.require(grid.size() == 100 && mx < 1e-6, std::string("max|R| ") + id, mx);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 5.0, "seconds", secs);
}

// 2 and 3. Connection and curvature of random doubly warped products against
// the closed forms, and cone curvature against the cone formula.
void warped_sweep(Outcome& o, bool curvature) {
  Rng rng(2024);
  double mx = 0.0;
  for (int k = 0; k < 5; ++k) {
    const WarpedSpec spec = random_spec(rng);
    const MetricField m = make_doubly_warped(spec);
    const auto grid = random_points(Vector{0.2, 0.3, -1.0, 0.3, -1.0}, Vector{1.3, 1.4, 1.0, 1.4, 1.0}, 400, rng.next());
    int used = 0;
    for (const auto& raw : grid) {
      // Line factors use one coordinate; trim to the metric dimension.
      Point p(raw.begin(), raw.begin() + m.dim());
      if (!m.in_domain(p) || used == 50) continue;
      ++used;
      if (curvature)
        mx = std::max(mx, max_diff(riemann(m, p).down, warped_curvature_oracle(spec, p).down));
      else
        mx = std::max(mx, max_diff(christoffel(m, p).gamma, warped_connection_oracle(spec, p).gamma));
    }
    if (used < 50) o.require(false, "points for warped product " + std::to_string(k), used);
  }
  o.require(mx < (curvature ? 1e-6 : 1e-8), curvature ? "max curvature diff" : "max Christoffel diff", mx);
  if (!curvature) return;

  struct Base {
    MetricField m;
    double c;
  };
  const Base bases[] = {{make_cc_catalog_entry("sphere2", 1).metric, 2.0},
                        {model_plane(-1), 1.0},
                        {make_cc_catalog_entry("desitter2", -1).metric, -1.0}};
  double cone_mx = 0.0;
  for (const auto& b : bases) {
    const MetricField cone = make_cone(b.m, b.c);
    for (const auto& p : domain_points(cone, {0.3, 0.2, -1.0}, {2.0, 1.4, 1.0}, 20))
      cone_mx = std::max(cone_mx, max_diff(riemann(cone, p).down, cone_curvature_oracle(b.m, b.c, p).down));
  }
  o.require(cone_mx < 1e-6, "max cone curvature diff", cone_mx);
}

// 4. Catalog entries have their attached curvature; the warping-function
// conditions hold for the trigonometric entries.
void catalog(Outcome& o) {
  int passed = 0;
  double worst_pass = 0.0;
  for (const auto& e : catalog_entries()) {
    for (int eps : {1, -1}) {
      const WarpedMetric w = make_cc_catalog_entry(e.id, eps);
      const auto grid = domain_points(w.metric, Vector(static_cast<std::size_t>(w.metric.dim()), 0.1),
                                      Vector(static_cast<std::size_t>(w.metric.dim()), 1.4), 10);
      double mx = 0.0;
      for (const auto& p : grid) mx = std::max(mx, constant_curvature_residual(w.metric, p, *w.k));
      if (mx < 1e-6 && !grid.empty()) {
        ++passed;
        worst_pass = std::max(worst_pass, mx);
      }
    }
  }
  o.require(passed >= 6, "catalog entries passing (both signs)", passed);
  o.info("worst passing residual", worst_pass);

  double cc = 0.0;
  std::vector<double> samples;
  for (int k = 1; k < 20; ++k) samples.push_back(k * (M_PI / 2) / 20);
  for (const char* id : {"cos-sin", "cos-dt-sin", "cos-sin-du", "cos-dt-sin-du"}) {
    for (int eps : {1, -1}) {
      const WarpedMetric w = make_cc_catalog_entry(id, eps);
      auto fk = [](const std::optional<MetricField>& g) { return g ? g->constant_curvature : std::nullopt; };
      for (const auto& r : warped_cc_conditions(w.spec, *w.k, samples, fk(w.spec.g1), fk(w.spec.g2)))
        cc = std::max(cc, r.residual);
    }
  }
  o.require(cc < 1e-10, "cos/sin conditions", cc);
}

// 5. RK4 cone geodesics against the closed forms over the de Sitter base.
Point null_beta(double sigma, double) { return {std::asinh(sigma), std::atan(sigma)}; }
Point space_beta(double sigma, double L) { return {0.0, L * sigma}; }
Point time_beta(double sigma, double L) { return {L * sigma, 0.0}; }

void geodesics(Outcome& o) {
  const MetricField cone = make_cone(make_example_cosh(line_metric("t")).metric);
  struct Case {
    CausalCase kind;
    double rho, L;
    Vector base_v;
    Point (*beta)(double, double);
  };
  const Case cases[] = {{CausalCase::Lightlike, -0.5, 0.0, {1.0, 1.0}, null_beta},
                        {CausalCase::Spacelike, -0.4, 1.3, {0.0, 1.3}, space_beta},
                        {CausalCase::Timelike, 0.2, 1.5, {1.5, 0.0}, time_beta}};
  for (const auto& c : cases) {
    const auto p = ConeGeodesicClosedForm::make(1.0, c.rho, c.L, c.kind);
    const auto r = integrate_geodesic(cone, GeodesicState::at(cone, {1.0, 0.0, 0.0}, {c.rho, c.base_v[0], c.base_v[1]}),
                                      0.9 * p.T, 4000);
    double err = r.event == GeodesicEvent::Survived ? 0.0 : INFINITY;
    for (const auto& smp : r.samples) {
      const auto cf = cone_geodesic_closed_form(p, smp.t);
      const Point b = c.beta(cf.f, c.L);
      err = std::max({err, std::abs(smp.x[0] - cf.r), std::abs(smp.x[1] - b[0]), std::abs(smp.x[2] - b[1])});
    }
    o.require(err < 1e-6, to_string(c.kind) + " position error", err);
    o.require(r.energy_drift < 1e-8, to_string(c.kind) + " drift", r.energy_drift);
  }
  const auto tp = ConeGeodesicClosedForm::make(1.0, 0.2, 1.5, CausalCase::Timelike);
  const auto run = integrate_geodesic(cone, GeodesicState::at(cone, {1.0, 0.0, 0.0}, {0.2, 1.5, 0.0}), 1.5 * tp.T, 3000);
  o.require(run.event != GeodesicEvent::Survived && std::abs(run.t_end - tp.T) < 1e-3, "|T_numeric - r/(Lr-rho)|",
            std::abs(run.t_end - tp.T));
}

// 6. Holonomy dimensions.
void holonomy_dims(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  SpanOptions opt;
  opt.rank_tol = 1e-6;
  const int flat = lie_closure(ambrose_singer_span(flat_chart(3), {0.1, 0.2, 0.3}, opt)).dim();
  const int sphere = lie_closure(ambrose_singer_span(model_plane(1), {1.0, 0.3}, opt)).dim();
  const int trig = lie_closure(ambrose_singer_span(trig_base(), {0.7, 0.2, -0.3}, opt)).dim();
  o.require(flat == 0, "flat", flat);
  o.require(sphere == 1, "round 2-sphere", sphere);
  o.require(trig == 3, "trig base (dim 3)", trig);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 30.0, "seconds", secs);
}

// 7. Parallel null field on the cone over -(dt^2 + e^{-2t} g_N), g_N the round sphere.
void null_field(Outcome& o) {
  const MetricField cone = make_cone(make_horosphere_base(model_plane(1)).metric);
  const auto grid = domain_points(cone, {0.5, -0.8, 0.4, -1.0}, {2.0, 0.8, 2.6, 1.0}, 64);
  const auto p = VectorFieldExpr::parse({"exp(-t)", "exp(-t)/r", "0", "0"}, cone.coords());
  o.require(grid.size() == 64, "grid points", static_cast<double>(grid.size()));
  o.require(verify_parallel_field(cone, p, grid) < 1e-8, "residual", verify_parallel_field(cone, p, grid));
  const auto ann = annihilated_vectors(ambrose_singer_span(cone, {1.2, 0.1, 1.0, 0.4}));
  o.require(!ann.kernel.empty(), "kernel dim", static_cast<double>(ann.kernel.size()));
  o.require(ann.has_lightlike, "light-like in kernel", ann.has_lightlike);
}

// 8. pp-wave chart with a flat two-dimensional fiber.
void pp_wave(Outcome& o) {
  const MetricField pp = make_pp_wave_cone_chart(model_plane(0));
  const Point p{0.3, 1.1, 0.2, -0.4};
  const HolonomySpan span = lie_closure(ambrose_singer_span(pp, p));
  const ScanResult scan = invariant_subspace_scan(span);
  bool isotropic_line = false;
  for (const auto& s : scan.subspaces) isotropic_line = isotropic_line || (s.dim == 1 && s.isotropic);
  o.require(span.dim() == 2, "span dim", span.dim());
  o.require(scan.label == HolonomyClass::IndecomposableReducible, "class " + to_string(scan.label), 0);
  o.require(isotropic_line, "isotropic line", isotropic_line);
  o.info("max|R|", riemann(pp, p).max_abs());

  // Not part of the criterion: a curved fiber gives a non-trivial algebra.
  const MetricField curved = make_pp_wave_cone_chart(model_plane(1));
  const HolonomySpan cs = lie_closure(ambrose_singer_span(curved, {0.3, 1.1, 1.0, -0.4}));
  const ScanResult cscan = invariant_subspace_scan(cs);
  o.info("sphere-fiber span dim", cs.dim());
  o.info("sphere-fiber class", to_string(cscan.label));
}

// 9. The explicit para-Sasaki family.
void para_sasaki(Outcome& o) {
  for (const char* u : {"x1", "x1 + x1^3"}) {
    const ParaSasakiExample ex = make_para_sasaki_example({u});
    const auto grid = random_points(Vector(3, -0.5), Vector(3, 0.5), 12, 9);
    const StructureReport rep = verify_para_sasaki({ex.metric, ex.reeb, grid}, 1e-7);
    double mx = 0.0;
    for (const auto& item : rep.items) mx = std::max(mx, item.value);
    const std::string tag = std::string("u=") + u;
    o.require(rep.pass() && mx < 1e-7, tag + " residual", mx);
    const Point p{0.1, 0.2, -0.3};
    const double nr = para_sasaki_nabla_R_component(ex, p);
    o.require(std::abs(nr - 4.0) < 1e-3, tag + " nablaR", nr);
    const Curvature R = riemann(ex.metric, p);
    o.require(R.max_abs() > 0.1, tag + " max|R|", R.max_abs());
    const double cc = best_constant_curvature(R).residual;
    o.require(cc > 0.1, tag + " cc residual", cc);
  }
}

// 10. The cone over the para-Sasaki example is para-Kaehler.
void para_kahler(Outcome& o) {
  const ParaSasakiExample ex = make_para_sasaki_example({"x1 + x1^3"});
  const auto grid = random_points(Vector(3, -0.5), Vector(3, 0.5), 6, 10);
  const ConeStructure cs = sasaki_to_cone_J({ex.metric, ex.reeb, grid});
  const StructureReport pk = verify_para_kahler(cs.cone, cs.J, cs.grid, 1e-6);
  double mx = 0.0;
  for (const auto& item : pk.items)
    if (item.kind == ResidualItem::Kind::Max) mx = std::max(mx, item.value);
  o.require(pk.pass() && cs.report.pass(), "para-Kaehler residual", mx);

  const Point p = cs.grid.front();
  const HolonomySpan span = lie_closure(ambrose_singer_span(cs.cone, p));
  const ScanResult scan = invariant_subspace_scan(span);
  // Look for two isotropic invariant subspaces spanning the tangent space.
  const int n = cs.cone.dim();
  bool found = false;
  for (std::size_t a = 0; a < scan.subspaces.size() && !found; ++a)
    for (std::size_t b = a + 1; b < scan.subspaces.size() && !found; ++b) {
      const auto& A = scan.subspaces[a];
      const auto& B = scan.subspaces[b];
      if (!A.isotropic || !B.isotropic || A.dim + B.dim != n) continue;
      std::vector<Vector> cols;
      for (std::size_t j = 0; j < A.basis.cols(); ++j) cols.push_back(A.basis.col(j));
      for (std::size_t j = 0; j < B.basis.cols(); ++j) cols.push_back(B.basis.col(j));
      found = static_cast<int>(orthonormal_basis(cols, 1e-6).size()) == n;
    }
  o.info("span dim", span.dim());
  o.info("invariant subspaces", scan.subspaces.size());
  o.require(found, "complementary isotropic pair", found);
  const double curv = riemann(cs.cone, p).max_abs();
  o.require(curv > 1e-3, "cone max|R|", curv);
}

// 11. Alpha splitting on the product-of-cones charts.
void alpha_split(Outcome& o) {
  const MetricField cone = make_cone(trig_base());
  const auto& c = cone.coords();
  const auto grid = domain_points(cone, {0.4, 0.2, -1, -1}, {2.0, 1.3, 1, 1}, 24);
  const auto res = extract_alpha_split(
      cone, {VectorFieldExpr::parse({"cos(s)", "-sin(s)/r", "0", "0"}, c), VectorFieldExpr::parse({"0", "0", "1", "0"}, c)},
      {VectorFieldExpr::parse({"sin(s)", "cos(s)/r", "0", "0"}, c), VectorFieldExpr::parse({"0", "0", "0", "1"}, c)}, grid);
  double am = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) am = std::max(am, std::abs(res.alpha[k] - std::pow(std::cos(grid[k][1]), 2)));
  o.require(am < 1e-8, "|alpha - cos^2 s|", am);
  double lemma = 0.0;
  for (const char* item : {"decomposition", "orthogonality", "alpha-norm", "X-norm", "radial-alpha", "E1-alpha", "E2-alpha",
                           "nabla-E1", "nabla-E2", "nabla-radial"})
    lemma = std::max(lemma, res.report[item]);
  o.require(lemma < 1e-7, "identities", lemma);
  o.require(res.report["alpha-ode"] < 1e-7, "ODE", res.report["alpha-ode"]);
  o.require(res.report["gradient"] < 1e-6, "gradient", res.report["gradient"]);

  const MetricField hc = make_cone(make_double_polar(DoublePolar::Hyperbolic, 1, line_metric("u"), line_metric("w")).metric);
  const auto& h = hc.coords();
  const auto hg = domain_points(hc, {0.4, 0.1, -1, -1}, {2.0, 1.5, 1, 1}, 24);
  const auto hr = extract_alpha_split(
      hc, {VectorFieldExpr::parse({"cosh(s)", "-sinh(s)/r", "0", "0"}, h), VectorFieldExpr::parse({"0", "0", "1", "0"}, h)},
      {VectorFieldExpr::parse({"-sinh(s)", "cosh(s)/r", "0", "0"}, h), VectorFieldExpr::parse({"0", "0", "0", "1"}, h)}, hg);
  double hm = 0.0;
  for (std::size_t k = 0; k < hg.size(); ++k) hm = std::max(hm, std::abs(hr.alpha[k] - std::pow(std::cosh(hg[k][1]), 2)));
  o.require(hm < 1e-8 && hr.report.pass(), "|alpha - cosh^2 s|", hm);
}

// 12. Coordinate changes between cones and products of cones, and the
// pp-wave chart as a cone.
void isometries(Outcome& o) {
  const Box plus_box{{0, -1e300, 0, -1e300}, {1e300, 1e300, 1e300, 1e300}};
  auto run = [&](const std::string& tag, const MetricField& src, const MetricField& dst, const std::vector<std::string>& map,
                 const Vector& lo, const Vector& hi) {
    IsometrySpec s{src, dst, {}};
    for (const auto& e : map) s.map.push_back(parse(e));
    const auto grid = domain_points(src, lo, hi, 200);
    const double v = grid.size() == 200 ? verify_isometry(s, grid) : INFINITY;
    o.require(v < 1e-9, tag, v);
  };
  const MetricField product = make_explicit(
      "cones", {"r1", "u", "r2", "w"},
      {{"1", "0", "0", "0"}, {"0", "r1^2", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "r2^2"}}, {0, 4}, plus_box);
  run("trig cone -> cone x cone", make_cone(trig_base()), product, {"r*cos(s)", "u", "r*sin(s)", "w"}, {0.3, 0.1, -1, -1},
      {2.0, 1.4, 1, 1});
  run("cone x cone -> trig cone", product, make_cone(trig_base()), {"sqrt(r1^2 + r2^2)", "atan(r2/r1)", "u", "w"},
      {0.3, -1, 0.3, -1}, {2.0, 1, 2.0, 1});

  const MetricField hyp = make_cone(make_double_polar(DoublePolar::Hyperbolic, 1, line_metric("u"), line_metric("w")).metric);
  const MetricField mixed = make_explicit(
      "cones-", {"r1", "u", "r2", "w"},
      {{"1", "0", "0", "0"}, {"0", "r1^2", "0", "0"}, {"0", "0", "-1", "0"}, {"0", "0", "0", "r2^2"}}, {1, 3}, plus_box);
  run("hyperbolic cone -> Omega", hyp, mixed, {"r*cosh(s)", "u", "r*sinh(s)", "w"}, {0.3, 0.1, -1, -1}, {2.0, 1.5, 1, 1});
  run("Omega -> hyperbolic cone", mixed, hyp, {"sqrt(r1^2 - r2^2)", "artanh(r2/r1)", "u", "w"}, {1.0, -1, 0.1, -1},
      {2.0, 1, 0.9, 1});

  WarpedSpec hb;
  hb.epsilon = -1;
  hb.f1 = parse("exp(-s)");
  hb.a = -10.0;
  hb.b = 10.0;
  hb.g1 = model_plane(1);
  const MetricField target = make_cone(make_doubly_warped(hb));
  const MetricField pp = make_pp_wave_cone_chart(model_plane(1));
  run("pp-wave chart -> cone", pp, target, {"sqrt(2*x*y)", "log(2*x/y)/2", pp.coords()[2], pp.coords()[3]},
      {0.1, 0.2, 0.3, -1}, {2.0, 2.0, 2.8, 1});
}

// 13. Gallot's parallel field and reachability of the flat leaves.
void gallot(Outcome& o) {
  const ScenarioConfig c = scenario_from_json(Json::parse(R"({
    "id": "acceptance-13",
    "metric": {"family": "cone", "base": {"family": "cc-catalog", "entry": "desitter2"}},
    "grid": {"kind": "halton", "count": 16, "ranges": [[0.6, 1.6], [-0.8, 0.8], [-1, 1]]},
    "seed": 13, "t_max": 1.0,
    "checks": [{"name": "gallot-H", "count": 10}, {"name": "reachability", "count": 5}]})"));
  const Report r = run_checks(c);
  o.require(r.checks[0].pass, "H residual", r.checks[0].value);
  o.require(r.checks[1].pass && r.checks[1].details.at("ordered") == 1.0, "escape vs closed form", r.checks[1].value);
}

// 14. Completeness probes on the trigonometric and cosh charts.
void completeness(Outcome& o) {
  Rng rng(14);
  std::vector<GeodesicState> trig_states, cosh_states;
  WarpedSpec ts;
  ts.f1 = parse("cos(s)");
  ts.f2 = parse("sin(s)");
  ts.a = 0.0;
  ts.b = M_PI / 2;
  ts.g1 = line_metric("u", -1);
  ts.g2 = line_metric("w");
  const MetricField trig = make_doubly_warped(ts);
  const MetricField cosh = make_example_cosh(model_plane(0)).metric;
  for (int k = 0; k < 20; ++k) {
    trig_states.push_back(GeodesicState::at(trig, {rng.uniform(0.3, 1.2), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                            {rng.normal(), rng.normal(), rng.normal()}));
    cosh_states.push_back(GeodesicState::at(cosh, {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                            {rng.normal(), rng.normal(), rng.normal()}));
  }
  const auto tr = completeness_probe(trig, trig_states, 50.0, 2500);
  double first = INFINITY;
  for (const auto& rec : tr.records)
    if (rec.event != GeodesicEvent::Survived) first = std::min(first, rec.t);
  o.require(tr.escapes() > 0, "trig escapes", tr.escapes());
  o.info("first escape t", first);
  const auto cr = completeness_probe(cosh, cosh_states, 50.0, 2500);
  o.require(cr.escapes() == 0, "cosh escapes", cr.escapes());
  o.require(cr.max_drift() < 1e-6, "cosh drift", cr.max_drift());
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "flat cone over curvature-1 bases", flat_cone},
      {2, "connection oracle", [](Outcome& o) { warped_sweep(o, false); }},
      {3, "curvature oracle", [](Outcome& o) { warped_sweep(o, true); }},
      {4, "constant-curvature catalog", catalog},
      {5, "cone geodesic closed forms", geodesics},
      {6, "holonomy dimensions", holonomy_dims},
      {7, "parallel light-like field", null_field},
      {8, "pp-wave holonomy", pp_wave},
      {9, "para-Sasaki example", para_sasaki},
      {10, "para-Kaehler cone", para_kahler},
      {11, "alpha splitting", alpha_split},
      {12, "isometries", isometries},
      {13, "Gallot field and reachability", gallot},
      {14, "completeness probe", completeness},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  bool ok = true;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.info("error", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s  %s (%.2fs)  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, secs, o.notes.str().c_str());
    std::fflush(stdout);
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
