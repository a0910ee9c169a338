#include <cmath>

#include "conehol/metric_zoo.hpp"
#include "conehol/random.hpp"
#include "conehol/tensor_ops.hpp"
#include "doctest.h"

using namespace conehol;

namespace {

MetricField flat(int n) {
  std::vector<std::string> coords;
  std::vector<std::vector<std::string>> c(static_cast<std::size_t>(n), std::vector<std::string>(static_cast<std::size_t>(n), "0"));
  for (int i = 0; i < n; ++i) {
    coords.push_back("x" + std::to_string(i));
    c[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = "1";
  }
  return make_explicit("flat", coords, c, {0, n}, Box{});
}

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
  if (rng.uniform() < 0.8) spec.g2 = factor();
  return spec;
}

Point random_point(Rng& rng, const WarpedSpec& spec) {
  Point p{rng.uniform(0.2, 1.3)};
  auto add = [&](const MetricField& g) {
    if (g.dim() == 1) {
      p.push_back(rng.uniform(-1, 1));
    } else {
      p.push_back(rng.uniform(0.3, 1.4));
      p.push_back(rng.uniform(-1, 1));
    }
  };
  add(*spec.g1);
  if (spec.g2) add(*spec.g2);
  return p;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("tensor_ops") {
  TEST_CASE("christoffel symbols of simple charts") {
    const Christoffel c0 = christoffel(flat(3), {0.1, 0.2, 0.3});
    for (double v : c0.gamma) CHECK(v == 0.0);

    const MetricField cone = make_cone(line_metric("th"));
    const Christoffel cc = christoffel(cone, {2.0, 0.3});
    CHECK(cc(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cc(1, 1, 0) == cc(1, 0, 1));
    CHECK(cc(0, 1, 1) == doctest::Approx(-2.0).epsilon(1e-14));

    const Christoffel cs = christoffel(model_plane(1), {M_PI / 4, 0.0});
    CHECK(cs(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-14));
  }

  TEST_CASE("cone curvature against the cone formula") {
    const MetricField cone = make_cone(model_plane(-1));
    const Point p{2.0, 0.8, 0.4};
    const Curvature r = riemann(cone, p);
    const Vector x{0, 1, 0};
    const Vector y{0, 0, 1.0 / std::sinh(0.8)};
    CHECK(r.lowered(x, y, y, x) == doctest::Approx(-8.0).epsilon(1e-10));
    CHECK(max_diff(r.down, cone_curvature_oracle(model_plane(-1), 1.0, p).down) < 1e-10);

    const MetricField flat_cone = make_cone(model_plane(1));
    CHECK(riemann(flat_cone, {1.7, 1.1, 0.3}).max_abs() < 1e-12);
  }

  TEST_CASE("the round sphere has curvature +1") {
    const MetricField s2 = model_plane(1);
    const Curvature r = riemann(s2, {1.0, 0.5});
    CHECK(constant_curvature_residual(r, 1.0) < 1e-12);
    CHECK(constant_curvature_residual(r, -1.0) > 0.5);
    const CurvatureFit fit = best_constant_curvature(r);
    CHECK(fit.kappa == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(constant_curvature_residual(flat(3), {0, 0, 0}, 0.0) == 0.0);
  }

  TEST_CASE("curvature symmetries and Bianchi on built-in metrics") {
    Rng rng(7);
    std::vector<WarpedMetric> ms;
    for (const auto& e : catalog_entries()) {
      ms.push_back(make_cc_catalog_entry(e.id, 1));
      ms.push_back(make_cc_catalog_entry(e.id, -1));
    }
    for (const auto& w : ms) {
      for (int k = 0; k < 20; ++k) {
        Point p{rng.uniform(0.2, 1.2)};
        if (w.spec.g1) {
          if (w.spec.g1->dim() == 1) p.push_back(rng.uniform(-1, 1));
          else p.insert(p.end(), {rng.uniform(0.3, 1.4), rng.uniform(-1, 1)});
        }
        if (w.spec.g2) {
          if (w.spec.g2->dim() == 1) p.push_back(rng.uniform(-1, 1));
          else p.insert(p.end(), {rng.uniform(0.3, 1.4), rng.uniform(-1, 1)});
        }
        const Curvature r = riemann(w.metric, p);
        CHECK(curvature_symmetry_residual(r) < 1e-7);
        CHECK(bianchi_residual(r) < 1e-7);
        CHECK(metric_compatibility_residual(w.metric, p) < 1e-8);
      }
    }
  }

  TEST_CASE("warped connection and curvature oracles") {
    Rng rng(31);
    for (int s = 0; s < 5; ++s) {
      const WarpedSpec spec = random_spec(rng);
      const MetricField m = make_doubly_warped(spec);
      for (int k = 0; k < 10; ++k) {
        const Point p = random_point(rng, spec);
        CHECK(max_diff(christoffel(m, p).gamma, warped_connection_oracle(spec, p).gamma) < 1e-8);
        CHECK(max_diff(riemann(m, p).down, warped_curvature_oracle(spec, p).down) < 1e-6);
      }
    }
  }

  TEST_CASE("warped oracle sample values") {
    WarpedSpec spec;
    spec.f1 = parse("cos(s)");
    spec.f2 = parse("sin(s)");
    spec.a = 0;
    spec.b = M_PI / 2;
    spec.g1 = line_metric("t");
    spec.g2 = line_metric("u");
    const Christoffel c = warped_connection_oracle(spec, {M_PI / 6, 0, 0});
    CHECK(c(1, 0, 1) == doctest::Approx(-0.5773502692).epsilon(1e-9));
    CHECK(c(2, 0, 2) == doctest::Approx(1.7320508076).epsilon(1e-9));

    const Curvature r = warped_curvature_oracle(spec, {M_PI / 4, 0, 0});
    const Matrix e = r.endomorphism(0, 1);
    const Matrix w = wedge(r.g, {1, 0, 0}, {0, 1, 0});
    CHECK((e - w).max_abs() < 1e-12);

    WarpedSpec h;
    h.epsilon = -1;
    h.f1 = parse("cosh(s)");
    h.f2 = parse("sinh(s)");
    h.a = 0;
    h.b = 10;
    h.g1 = line_metric("t");
    h.g2 = line_metric("u");
    const Curvature rh = warped_curvature_oracle(h, {1.0, 0, 0});
    CHECK((rh.endomorphism(1, 2) - wedge(rh.g, {0, 1, 0}, {0, 0, 1})).max_abs() < 1e-12);
  }

  TEST_CASE("constant-curvature conditions on warping functions") {
    WarpedSpec spec;
    spec.f1 = parse("cos(s)");
    spec.f2 = parse("sin(s)");
    spec.a = 0;
    spec.b = M_PI / 2;
    spec.g1 = line_metric("t");
    spec.g2 = line_metric("u");
    std::vector<double> ss;
    for (int k = 1; k < 20; ++k) ss.push_back(k * M_PI / 40);
    for (const auto& r : warped_cc_conditions(spec, 1.0, ss, std::nullopt, std::nullopt)) CHECK(r.residual < 1e-10);

    WarpedSpec e;
    e.f1 = parse("exp(s)");
    e.a = -5;
    e.b = 5;
    e.g1 = model_plane(0);
    const auto re = warped_cc_conditions(e, -1.0, ss, std::nullopt, std::nullopt);
    CHECK(re.size() == 2);
    for (const auto& r : re) CHECK(r.residual < 1e-10);

    WarpedSpec h;
    h.epsilon = -1;
    h.f1 = parse("cosh(s)");
    h.f2 = parse("sinh(s)");
    h.a = 0;
    h.b = 10;
    h.g1 = line_metric("t");
    h.g2 = line_metric("u");
    for (const auto& r : warped_cc_conditions(h, 1.0, ss, std::nullopt, std::nullopt)) CHECK(r.residual < 1e-10);

    WarpedSpec bad = e;
    bad.g1 = make_explicit("plane", {"x", "y"}, {{"1", "0"}, {"0", "1"}}, {0, 2}, Box{});
    CHECK_THROWS_AS(warped_cc_conditions(bad, -1.0, ss, std::nullopt, std::nullopt), ConfigError);
  }

  TEST_CASE("catalog curvature matches the attached value") {
    Rng rng(3);
    int checked = 0;
    for (const auto& e : catalog_entries()) {
      for (int eps : {1, -1}) {
        const WarpedMetric w = make_cc_catalog_entry(e.id, eps);
        Point p{0.7};
        if (w.spec.g1) {
          if (w.spec.g1->dim() == 1) p.push_back(0.2);
          else p.insert(p.end(), {0.9, 0.1});
        }
        if (w.spec.g2) {
          if (w.spec.g2->dim() == 1) p.push_back(-0.3);
          else p.insert(p.end(), {1.1, 0.4});
        }
        CHECK(constant_curvature_residual(w.metric, p, *w.k) < 1e-6);
        ++checked;
      }
    }
    CHECK(checked >= 6);
  }

  TEST_CASE("covariant derivative of the curvature") {
    const MetricField s3 = make_cc_catalog_entry("sphere3", 1).metric;
    CHECK(covariant_deriv_riemann(s3, {1.0, 0.8, 0.3}).max_abs() < 1e-3);
    CHECK(covariant_deriv_riemann(flat(3), {0, 0, 0}).max_abs() < 1e-12);

    const ParaSasakiExample ps = make_para_sasaki_example({"x1"});
    const Point p{0.3, 0.4, -0.2};
    const NablaRiemann nr = covariant_deriv_riemann(ps.metric, p);
    // Y^- = H^{-1} (u T + d_{x2}) with H = 1/2, u = x1.
    const Vector T{1, 0, 0}, d1{0, 1, 0};
    const Vector ym{2.0 * p[1], 0, 2.0};
    CHECK(nr.contract(d1, T, ym, d1, ym) == doctest::Approx(4.0).epsilon(1e-3));
  }

  TEST_CASE("Lie derivative of the metric") {
    const MetricField f2 = flat(2);
    const auto rot = VectorFieldExpr::parse({"-x1", "x0"}, f2.coords());
    CHECK(lie_derivative_metric(f2, rot, {0.3, -0.7}).max_abs() < 1e-15);

    const MetricField line = line_metric("x");
    const auto scale = VectorFieldExpr::parse({"x"}, {"x"});
    CHECK(lie_derivative_metric(line, scale, {1.3})(0, 0) == doctest::Approx(2.0));

    const ParaSasakiExample ps = make_para_sasaki_example({"x1+x1^3"});
    CHECK(lie_derivative_metric(ps.metric, ps.reeb, {0.1, 0.5, 0.2}).max_abs() < 1e-12);
  }

  TEST_CASE("covariant derivative of vector fields") {
    const MetricField cone = make_cone(model_plane(1));
    const auto dr = VectorFieldExpr::parse({"1", "0", "0"}, cone.coords());
    const Matrix d = covariant_derivative_vector(cone, dr, {2.0, 1.0, 0.5});
    CHECK(d(0, 0) == doctest::Approx(0.0));
    CHECK(d(1, 1) == doctest::Approx(0.5));
    CHECK(d(2, 2) == doctest::Approx(0.5));
    CHECK(std::abs(d(1, 2)) + std::abs(d(2, 1)) + std::abs(d(0, 1)) < 1e-14);

    const auto k = VectorFieldExpr::parse({"1", "2"}, {"x0", "x1"});
    CHECK(covariant_derivative_vector(flat(2), k, {0.1, 0.2}).max_abs() == 0.0);
  }

  TEST_CASE("covariant derivative jets agree with finite differences") {
    const MetricField cone = make_cone(model_plane(1));
    const auto x = VectorFieldExpr::parse({"r*cos(th)", "sin(ph)/r", "th*r"}, cone.coords());
    const Point p{1.5, 0.9, 0.2};
    const EndoJet j = covariant_derivative_jet(cone, x, p);
    CHECK((j.value - covariant_derivative_vector(cone, x, p)).max_abs() < 1e-13);
    for (int m = 0; m < 3; ++m) {
      Point a = p, b = p;
      const double h = 1e-5;
      a[static_cast<std::size_t>(m)] += h;
      b[static_cast<std::size_t>(m)] -= h;
      const Matrix fd = (covariant_derivative_vector(cone, x, a) - covariant_derivative_vector(cone, x, b)) * (0.5 / h);
      CHECK((fd - j.d[static_cast<std::size_t>(m)]).max_abs() < 1e-7);
    }
  }

  TEST_CASE("Nijenhuis tensor") {
    const std::vector<std::string> c{"x", "y"};
    auto max_n = [](const EndoJet& j) {
      double m = 0.0;
      for (double v : nijenhuis(j)) m = std::max(m, std::abs(v));
      return m;
    };
    CHECK(max_n(endo_field_from_expressions({{"1", "0"}, {"0", "1"}}, c)({0.2, 0.3})) == 0.0);
    CHECK(max_n(endo_field_from_expressions({{"0", "1"}, {"1", "0"}}, c)({0.2, 0.3})) == 0.0);
    // +1 eigenspace span{d_a + b d_x, d_b} is not involutive.
    const std::vector<std::string> c4{"a", "b", "x", "y"};
    const EndoField bad = endo_field_from_expressions(
        {{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"2*b", "0", "-1", "0"}, {"0", "0", "0", "-1"}}, c4);
    const EndoJet jb = bad({0.1, 0.2, 0.3, 0.4});
    CHECK((jb.value * jb.value - Matrix::identity(4)).max_abs() < 1e-15);
    CHECK(max_n(jb) > 0.5);
  }

  TEST_CASE("cone curvature annihilates the radial field") {
    const MetricField cone = make_cone(model_plane(-1));
    for (double r : {0.5, 1.0, 3.0}) {
      const Curvature c = riemann(cone, {r, 0.7, 0.2});
      for (int j = 0; j < 3; ++j) CHECK(c.endomorphism(0, j).max_abs() < 1e-7);
      const Matrix e = c.endomorphism(1, 2);
      CHECK(std::abs(e(0, 0)) + std::abs(e(0, 1)) + std::abs(e(0, 2)) + std::abs(e(1, 0)) + std::abs(e(2, 0)) < 1e-7);
    }
  }
}
