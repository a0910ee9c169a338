#include <cmath>

#include "conehol/errors.hpp"
#include "conehol/sampling.hpp"
#include "conehol/structure.hpp"
#include "doctest.h"

using namespace conehol;

namespace {

ParaSasakiCandidate example_candidate(const std::vector<std::string>& u, std::uint64_t seed = 3) {
  const ParaSasakiExample ex = make_para_sasaki_example(u);
  const std::size_t n = static_cast<std::size_t>(ex.metric.dim());
  return {ex.metric, ex.reeb, random_points(Vector(n, -0.5), Vector(n, 0.5), 6, seed)};
}

MetricField flat_21() {
  return make_explicit("flat(2,1)", {"t", "x", "y"}, {{"-1", "0", "0"}, {"0", "-1", "0"}, {"0", "0", "1"}}, {2, 1},
                       Box{});
}

// -ds^2 + cosh(s)^2 dth^2 - sinh(s)^2 dph^2.
MetricField pseudo_sphere_21() {
  return make_explicit("S(2,1)", {"s", "th", "ph"},
                       {{"-1", "0", "0"}, {"0", "cosh(s)^2", "0"}, {"0", "0", "-sinh(s)^2"}}, {2, 1},
                       Box{{0.0, -1e300, -1e300}, {1e300, 1e300, 1e300}});
}

std::vector<VectorFieldExpr> s21_fields(const MetricField& m) {
  return {VectorFieldExpr::parse({"cos(th-ph)", "-tanh(s)*sin(th-ph)", "sin(th-ph)/tanh(s)"}, m.coords()),
          VectorFieldExpr::parse({"-sin(th-ph)", "-tanh(s)*cos(th-ph)", "cos(th-ph)/tanh(s)"}, m.coords()),
          VectorFieldExpr::parse({"0", "1", "-1"}, m.coords())};
}

std::vector<Point> s21_grid() {
  std::vector<Point> g;
  for (double s : {0.4, 1.1})
    for (double th : {0.2, 1.7})
      for (double ph : {-0.6, 0.9}) g.push_back({s, th, ph});
  return g;
}

}  // namespace

TEST_SUITE("structure") {
  TEST_CASE("explicit family is para-Sasaki") {
    for (const auto& u : std::vector<std::vector<std::string>>{{"x1"}, {"x1 + x1^3"}, {"x1", "x2 + x1^2"}}) {
      CAPTURE(u[0]);
      const auto rep = verify_para_sasaki(example_candidate(u));
      for (const auto& item : rep.items) {
        CAPTURE(item.name);
        CHECK(item.value < 1e-9);
      }
      CHECK(rep.pass());
    }
  }

  TEST_CASE("flat negative control") {
    const MetricField m = flat_21();
    const ParaSasakiCandidate c{m, VectorFieldExpr::parse({"1", "0", "0"}, m.coords()), {{0.1, 0.2, 0.3}}};
    const auto rep = verify_para_sasaki(c);
    CHECK_FALSE(rep.pass());
    CHECK(rep["phi-squared"] == doctest::Approx(1.0));
    CHECK(rep["unit-timelike"] < 1e-14);
    CHECK(contact_dtheta(m, c.reeb, c.grid[0]).max_abs() == 0.0);

    const MetricField even = model_plane(0);
    CHECK_THROWS_AS(verify_para_sasaki({even, VectorFieldExpr::parse({"1", "0"}, even.coords()), {{0, 0}}}),
                    ConfigError);
  }

  TEST_CASE("contact form") {
    for (const auto& u : std::vector<std::vector<std::string>>{{"x1"}, {"x1", "x2 + x1^2"}}) {
      const auto rep = contact_form_checks(example_candidate(u));
      for (const auto& item : rep.items) {
        CAPTURE(item.name);
        CHECK(item.pass());
      }
      CHECK(rep["contact-volume"] > 1e-3);
    }
  }

  TEST_CASE("cone over the explicit family is para-Kaehler") {
    const auto cs = sasaki_to_cone_J(example_candidate({"x1 + x1^3"}));
    for (const auto& item : cs.report.items) {
      CAPTURE(item.name);
      CHECK(item.value < 1e-8);
    }
    const auto pk = verify_para_kahler(cs.cone, cs.J, cs.grid);
    for (const auto& item : pk.items) {
      CAPTURE(item.name);
      CHECK(item.pass());
    }

    const MetricField m = flat_21();
    CHECK_THROWS_AS(sasaki_to_cone_J({m, VectorFieldExpr::parse({"1", "0", "0"}, m.coords()), {{0, 0, 0}}}),
                    VerificationError);
  }

  TEST_CASE("para-Kaehler negative controls") {
    const MetricField flat4 = make_explicit("flat4", {"a", "b", "c", "d"},
                                            {{"0", "0", "1", "0"}, {"0", "0", "0", "1"}, {"1", "0", "0", "0"},
                                             {"0", "1", "0", "0"}},
                                            {2, 2}, Box{});
    const auto good = endo_field_from_expressions(
        {{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "-1", "0"}, {"0", "0", "0", "-1"}}, flat4.coords());
    const std::vector<Point> grid{{0.1, 0.2, 0.3, 0.4}, {-0.5, 0.6, 0.2, -0.1}};
    CHECK(verify_para_kahler(flat4, good, grid).pass());

    // E+ = span{d_a, d_b + a d_d} is not integrable.
    const auto twisted = endo_field_from_expressions(
        {{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "-1", "0"}, {"0", "2*a", "0", "-1"}}, flat4.coords());
    const auto rep = verify_para_kahler(flat4, twisted, grid);
    CHECK(rep["J-squared"] < 1e-14);
    CHECK(rep["nijenhuis"] > 0.5);

    const auto unbalanced = endo_field_from_expressions(
        {{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "-1"}}, flat4.coords());
    CHECK(verify_para_kahler(flat4, unbalanced, grid)["eigen-balance"] == 2.0);

    const auto singular = endo_field_from_expressions(
        {{"1/a", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "-1", "0"}, {"0", "0", "0", "-1"}}, flat4.coords());
    CHECK_THROWS_AS(verify_para_kahler(flat4, singular, {{0.0, 0.1, 0.1, 0.1}}), VerificationError);
  }

  TEST_CASE("para-Sasaki curvature on the contact distribution") {
    const ParaSasakiExample ex = make_para_sasaki_example({"x1 + x1^3"});
    const Point p{0.2, 0.3, -0.1};
    CHECK(para_sasaki_curvature_residual(ex.metric, ex.reeb, p, 1) < 1e-10);
    // omega = g(., J.) has the opposite sign and fails.
    CHECK(para_sasaki_curvature_residual(ex.metric, ex.reeb, p, -1) > 1.0);
  }

  TEST_CASE("nabla R component of the explicit family") {
    const ParaSasakiExample ex = make_para_sasaki_example({"x1"});
    CHECK(para_sasaki_nabla_R_component(ex, {0.3, 0.4, -0.2}) == doctest::Approx(4.0).epsilon(1e-6));
    const ParaSasakiExample ex3 = make_para_sasaki_example({"x1 + x1^3"});
    CHECK(para_sasaki_nabla_R_component(ex3, {0.3, 0.4, -0.2}) == doctest::Approx(4.0).epsilon(1e-6));
  }

  TEST_CASE("alpha split of the cone over the trigonometric double polar metric") {
    const MetricField cone =
        make_cone(make_double_polar(DoublePolar::Trig, 1, line_metric("u"), line_metric("w")).metric);
    const auto& c = cone.coords();
    const std::vector<VectorFieldExpr> v1{VectorFieldExpr::parse({"cos(s)", "-sin(s)/r", "0", "0"}, c),
                                          VectorFieldExpr::parse({"0", "0", "1", "0"}, c)};
    const std::vector<VectorFieldExpr> v2{VectorFieldExpr::parse({"sin(s)", "cos(s)/r", "0", "0"}, c),
                                          VectorFieldExpr::parse({"0", "0", "0", "1"}, c)};
    std::vector<Point> grid{{1.3, M_PI / 3, 0.1, 0.2}};
    for (double r : {0.5, 2.0})
      for (double s : {0.3, 0.8, 1.2}) grid.push_back({r, s, -0.4, 0.7});
    const auto res = extract_alpha_split(cone, v1, v2, grid);
    for (const auto& item : res.report.items) {
      CAPTURE(item.name);
      CHECK(item.value < 1e-10);
    }
    CHECK(res.alpha[0] == doctest::Approx(0.25).epsilon(1e-14));
    // X~ alpha = r X^s d_s alpha with d_s alpha = -2 sin s cos s.
    const double s0 = M_PI / 3;
    CHECK(1.3 * res.X[0][1] * (-2.0 * std::sin(s0) * std::cos(s0)) == doctest::Approx(0.375).epsilon(1e-12));

    const std::vector<VectorFieldExpr> clash{VectorFieldExpr::parse({"1", "0", "0", "0"}, c),
                                             VectorFieldExpr::parse({"0", "0", "1", "0"}, c)};
    const std::vector<VectorFieldExpr> clash2{VectorFieldExpr::parse({"2", "0", "0", "0"}, c),
                                              VectorFieldExpr::parse({"0", "0", "0", "1"}, c)};
    CHECK_THROWS_AS(extract_alpha_split(cone, clash, clash2, grid), DegenerateMetric);
    CHECK_THROWS_AS(extract_alpha_split(cone, v1, {v2[0]}, grid), DimensionError);
  }

  TEST_CASE("alpha split of the cone over the hyperbolic double polar metric") {
    const MetricField cone =
        make_cone(make_double_polar(DoublePolar::Hyperbolic, 1, line_metric("u"), line_metric("w")).metric);
    const auto& c = cone.coords();
    const std::vector<VectorFieldExpr> v1{VectorFieldExpr::parse({"cosh(s)", "-sinh(s)/r", "0", "0"}, c),
                                          VectorFieldExpr::parse({"0", "0", "1", "0"}, c)};
    const std::vector<VectorFieldExpr> v2{VectorFieldExpr::parse({"-sinh(s)", "cosh(s)/r", "0", "0"}, c),
                                          VectorFieldExpr::parse({"0", "0", "0", "1"}, c)};
    std::vector<Point> grid;
    for (double r : {0.5, 2.0})
      for (double s : {0.3, 0.8, 1.2}) grid.push_back({r, s, -0.4, 0.7});
    const auto res = extract_alpha_split(cone, v1, v2, grid);
    for (const auto& item : res.report.items) {
      CAPTURE(item.name);
      CHECK(item.value < 1e-9);
    }
    CHECK(res.alpha[1] == doctest::Approx(std::pow(std::cosh(0.8), 2)).epsilon(1e-14));
  }

  TEST_CASE("isometries between charts") {
    const MetricField trig_cone =
        make_cone(make_double_polar(DoublePolar::Trig, 1, line_metric("u"), line_metric("w")).metric);
    const MetricField product = make_explicit(
        "cones", {"r1", "u", "r2", "w"},
        {{"1", "0", "0", "0"}, {"0", "r1^2", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "r2^2"}}, {0, 4},
        Box{{0, -1e300, 0, -1e300}, {1e300, 1e300, 1e300, 1e300}});
    std::vector<Point> grid;
    for (double r : {0.5, 2.0})
      for (double s : {0.3, 1.2}) grid.push_back({r, s, -0.4, 0.7});
    const IsometrySpec fwd{trig_cone, product, {parse("r*cos(s)"), parse("u"), parse("r*sin(s)"), parse("w")}};
    CHECK(verify_isometry(fwd, grid) < 1e-12);
    std::vector<Point> pgrid;
    for (const auto& p : grid) pgrid.push_back({p[0] * std::cos(p[1]), p[2], p[0] * std::sin(p[1]), p[3]});
    const IsometrySpec back{product, trig_cone, {parse("sqrt(r1^2 + r2^2)"), parse("atan(r2/r1)"), parse("u"), parse("w")}};
    CHECK(verify_isometry(back, pgrid) < 1e-12);

    const IsometrySpec wrong{trig_cone, product, {parse("r*cos(s)"), parse("u"), parse("r*sin(s)"), parse("2*w")}};
    CHECK(verify_isometry(wrong, grid) > 0.1);
    const IsometrySpec outside{trig_cone, product, {parse("-r"), parse("u"), parse("r"), parse("w")}};
    CHECK_THROWS_AS(verify_isometry(outside, grid), OutsideDomain);
  }

  TEST_CASE("para-3-Sasaki structure on S(2,1)") {
    const MetricField m = pseudo_sphere_21();
    const auto rep = verify_three_sasaki(m, s21_fields(m), s21_grid());
    for (const auto& item : rep.items) {
      CAPTURE(item.name);
      CHECK(item.value < 1e-9);
    }

    auto swapped = s21_fields(m);
    std::swap(swapped[0], swapped[1]);
    const auto bad = verify_three_sasaki(m, swapped, s21_grid());
    CHECK(bad["orthonormality"] < 1e-12);
    CHECK(bad["bracket-12"] > 1.0);

    const std::vector<VectorFieldExpr> zero(3, VectorFieldExpr::parse({"0", "0", "0"}, m.coords()));
    CHECK(verify_three_sasaki(m, zero, s21_grid())["orthonormality"] == doctest::Approx(1.0));
  }
}
