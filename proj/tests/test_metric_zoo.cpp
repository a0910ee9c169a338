#include <cmath>
#include <set>

#include "conehol/errors.hpp"
#include "conehol/metric_zoo.hpp"
#include "doctest.h"

using namespace conehol;

TEST_SUITE("metric_zoo") {
  TEST_CASE("catalog ids are unique and buildable") {
    std::set<std::string> ids;
    for (const auto& e : catalog_entries()) {
      CAPTURE(e.id);
      CHECK(ids.insert(e.id).second);
      for (int eps : {1, -1}) {
        const WarpedMetric w = make_cc_catalog_entry(e.id, eps);
        REQUIRE(w.k.has_value());
        CHECK(*w.k == e.k_factor * eps);
      }
    }
    CHECK(ids.size() >= 6);
    CHECK_THROWS_AS(make_cc_catalog_entry("no-such-entry", 1), ConfigError);
  }

  TEST_CASE("model spaces") {
    CHECK(make_cc_catalog_entry("sphere2", 1).metric.dim() == 2);
    CHECK(*make_cc_catalog_entry("sphere3", 1).k == 1.0);
    CHECK(*make_cc_catalog_entry("hyperbolic3", 1).k == -1.0);
    const MetricField ds = make_cc_catalog_entry("desitter2", -1).metric;
    CHECK(ds.declared_signature() == Signature{1, 1});
    const Matrix g = metric_eval(ds, {0.5, 0.1});
    CHECK(g(0, 0) == -1.0);
    CHECK(g(1, 1) == doctest::Approx(std::pow(std::cosh(0.5), 2)));
  }

  TEST_CASE("cone construction") {
    const MetricField base = model_plane(-1);
    const MetricField c = make_cone(base, -2.0);
    CHECK(c.coords()[0] == "r");
    CHECK(c.dim() == 3);
    const Matrix g = metric_eval(c, {1.5, 0.7, 0.2});
    CHECK(g(0, 0) == -2.0);
    CHECK(g(2, 2) == doctest::Approx(2.25 * std::pow(std::sinh(0.7), 2)));
    CHECK(c.declared_signature() == Signature{1, 2});
    CHECK_THROWS_AS(metric_eval(c, {-1.0, 0.7, 0.2}), OutsideDomain);
    CHECK_THROWS_AS(make_cone(base, 0.0), ConfigError);

    // A base coordinate called r is renamed.
    const MetricField rb = make_explicit("rline", {"r"}, {{"1"}}, {0, 1}, Box{});
    const MetricField rc = make_cone(rb);
    CHECK(rc.coords()[0] == "r");
    CHECK(rc.coords()[1] != "r");
  }

  TEST_CASE("doubly warped products") {
    WarpedSpec s;
    s.epsilon = -1;
    s.f1 = parse("cosh(s)");
    s.f2 = parse("2");
    s.a = 0.0;
    s.b = 2.0;
    s.g1 = line_metric("u", -1);
    s.g2 = model_plane(0);
    const MetricField m = make_doubly_warped(s);
    REQUIRE(m.dim() == 4);
    const Matrix g = metric_eval(m, {1.0, 0.0, 0.3, 0.4});
    CHECK(g(0, 0) == -1.0);
    CHECK(g(1, 1) == doctest::Approx(-std::pow(std::cosh(1.0), 2)));
    CHECK(g(3, 3) == 4.0);
    CHECK(m.declared_signature() == Signature{2, 2});
    CHECK_THROWS_AS(metric_eval(m, {2.5, 0, 0, 0}), OutsideDomain);

    WarpedSpec bad = s;
    bad.f1 = parse("sin(s)");
    bad.a = -1.0;
    CHECK_THROWS_AS(make_doubly_warped(bad), Error);
    bad = s;
    bad.a = 3.0;
    CHECK_THROWS_AS(make_doubly_warped(bad), ConfigError);
  }

  TEST_CASE("para-Sasaki example components") {
    const ParaSasakiExample ex = make_para_sasaki_example({"x1 + x1^3"});
    REQUIRE(ex.metric.dim() == 3);
    CHECK(ex.metric.coords() == std::vector<std::string>{"t", "x1", "x2"});
    const double x = 0.4, u = x + x * x * x;
    const Matrix g = metric_eval(ex.metric, {0.1, x, -0.2});
    CHECK(g(0, 0) == -1.0);
    CHECK(g(0, 1) == 0.0);
    CHECK(g(0, 2) == doctest::Approx(u));
    CHECK(g(1, 2) == doctest::Approx(0.5 * (1 + 3 * x * x)));
    CHECK(g(2, 2) == doctest::Approx(-u * u));
    CHECK(g(1, 1) == 0.0);
    CHECK(ex.reeb.at({0.1, x, -0.2}) == Vector{1, 0, 0});
    CHECK_THROWS_AS(make_para_sasaki_example({"x1", "x3"}), Error);
  }

  TEST_CASE("pp-wave chart and double polar charts") {
    const MetricField pp = make_pp_wave_cone_chart(model_plane(0));
    const Matrix g = metric_eval(pp, {0.2, 1.5, 0.0, 0.0});
    CHECK(g(0, 1) == 1.0);
    CHECK(g(0, 0) == 0.0);
    CHECK(g(2, 2) == doctest::Approx(2.25));
    CHECK_THROWS_AS(metric_eval(pp, {0.2, -1.0, 0.0, 0.0}), OutsideDomain);

    const WarpedMetric trig = make_double_polar(DoublePolar::Trig, 1, line_metric("u"), line_metric("w"));
    CHECK(trig.spec.b == doctest::Approx(M_PI / 2));
    CHECK_THROWS_AS(metric_eval(trig.metric, {1.6, 0.0, 0.0}), OutsideDomain);
    const WarpedMetric hyp = make_double_polar(DoublePolar::Hyperbolic, 1, line_metric("u"), line_metric("w"));
    CHECK(metric_eval(hyp.metric, {0.3, 0, 0})(0, 0) == -1.0);
  }

  TEST_CASE("horospherical and cosh examples") {
    const WarpedMetric h = make_horospherical(1, model_plane(0));
    CHECK(*h.k == -1.0);
    CHECK(metric_eval(h.metric, {0.5, 0, 0})(1, 1) == doctest::Approx(std::exp(1.0)));
    const WarpedMetric b = make_horosphere_base(model_plane(1));
    const Matrix g = metric_eval(b.metric, {0.5, 1.0, 0.0});
    CHECK(g(0, 0) == -1.0);
    CHECK(g(1, 1) == doctest::Approx(-std::exp(-1.0)));
    const WarpedMetric c = make_example_cosh(line_metric("t"));
    CHECK(metric_eval(c.metric, {0.5, 0.0})(1, 1) == doctest::Approx(std::pow(std::cosh(0.5), 2)));
  }

  TEST_CASE("scaled and explicit metrics") {
    const MetricField s = scale_metric(model_plane(1), 4.0);
    REQUIRE(s.constant_curvature.has_value());
    CHECK(*s.constant_curvature == 0.25);
    CHECK_THROWS_AS(scale_metric(model_plane(1), 0.0), ConfigError);
    CHECK_THROWS_AS(make_explicit("asym", {"x", "y"}, {{"1", "x"}, {"0", "1"}}, {0, 2}, Box{}), ConfigError);
    CHECK_THROWS_AS(make_explicit("ragged", {"x", "y"}, {{"1"}, {"0", "1"}}, {0, 2}, Box{}), ConfigError);
    CHECK(family_ids().size() >= 9);
  }
}
