#include "conehol/tensor_ops.hpp"

#include <algorithm>
#include <cmath>

#include "conehol/errors.hpp"
#include "conehol/kernels.hpp"

namespace conehol {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

Vector unit(int n, int i) {
  Vector e(sz(n), 0.0);
  e[sz(i)] = 1.0;
  return e;
}

// f, f', f'' of a warping function at s.
struct Warp {
  double f, d1, d2;
};
Warp warp_at(const Expr& f, const std::string& coord, double s) {
  const BoundExpr b(f, {coord});
  const Jet2 x = Jet2::variable(s, 1, 0);
  const Jet2 v = b.eval(std::span<const Jet2>(&x, 1));
  if (v.value() == 0.0) throw DomainError("warping function vanishes at s = " + std::to_string(s));
  return {v.value(), v.grad(0), v.hess(0, 0)};
}

Point sub_point(const Point& p, std::size_t off, std::size_t len) {
  return Point(p.begin() + static_cast<long>(off), p.begin() + static_cast<long>(off + len));
}

}  // namespace

Vector Christoffel::contract(const Vector& v, const Vector& w) const {
  Vector out(sz(n));
  kernels::active().contract(gamma.data(), v.data(), w.data(), out.data(), sz(n));
  return out;
}

Matrix Christoffel::along(const Vector& v) const {
  Matrix a(sz(n), sz(n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (v[sz(i)] == 0.0) continue;
      kernels::active().axpy(v[sz(i)], gamma.data() + idx(k, i, 0), &a(sz(k), 0), sz(n));
    }
  return a;
}

Christoffel christoffel_from_jets(const MetricJets& j, const Matrix& ginv) {
  const int n = j.n;
  Christoffel c;
  c.n = n;
  c.gamma.assign(sz(n * n * n), 0.0);
  std::vector<double> first(sz(n));
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) {
      for (int l = 0; l < n; ++l) first[sz(l)] = 0.5 * (j.d(i, k, l) + j.d(k, i, l) - j.d(l, i, k));
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(sz(m), sz(l)) * first[sz(l)];
        c.at(m, i, k) = s;
        c.at(m, k, i) = s;
      }
    }
  return c;
}

Christoffel christoffel(const MetricField& m, const Point& p) {
  const MetricJets j = metric_jets(m, p, 1);
  return christoffel_from_jets(j, inverse(j.g));
}

ConnectionJets connection_jets(const MetricField& m, const Point& p) {
  const MetricJets j = metric_jets(m, p, 2);
  const int n = j.n;
  ConnectionJets c;
  c.n = n;
  c.g = j.g;
  c.ginv = inverse(j.g);
  c.dg = j.dg;
  c.gamma = christoffel_from_jets(j, c.ginv);
  c.dgamma.assign(sz(n * n * n * n), 0.0);
  std::vector<double> rhs(sz(n));
  for (int mm = 0; mm < n; ++mm)
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k) {
        // d_m Gamma_{l,ik} - d_m g_la Gamma^a_ik, then raise l.
        for (int l = 0; l < n; ++l) {
          double s = 0.5 * (j.dd(mm, i, k, l) + j.dd(mm, k, i, l) - j.dd(mm, l, i, k));
          for (int a = 0; a < n; ++a) s -= j.d(mm, l, a) * c.gamma(a, i, k);
          rhs[sz(l)] = s;
        }
        for (int q = 0; q < n; ++q) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += c.ginv(sz(q), sz(l)) * rhs[sz(l)];
          c.dgamma[sz(((mm * n + q) * n + i) * n + k)] = s;
          c.dgamma[sz(((mm * n + q) * n + k) * n + i)] = s;
        }
      }
  return c;
}

Curvature curvature_from_connection(const ConnectionJets& c) {
  const int n = c.n;
  const std::size_t n2 = sz(n * n);
  // P[(l,i)][(j,k)] = Gamma^l_im Gamma^m_jk as one (n^2 x n) * (n x n^2) product.
  std::vector<double> prod(n2 * n2);
  kernels::active().gemm(c.gamma.gamma.data(), c.gamma.gamma.data(), prod.data(), n2, sz(n), n2);
  auto P = [&](int l, int i, int j, int k) { return prod[sz(l * n + i) * n2 + sz(j * n + k)]; };

  Curvature r;
  r.n = n;
  r.g = c.g;
  r.up.assign(n2 * n2, 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const double v = c.d(i, l, j, k) - c.d(j, l, i, k) + P(l, i, j, k) - P(l, j, i, k);
          r.up[r.id4(l, k, i, j)] = v;
          r.up[r.id4(l, k, j, i)] = -v;
        }
  r.down.assign(n2 * n2, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int a = 0; a < n; ++a) s += c.g(sz(l), sz(a)) * r.up[r.id4(a, k, i, j)];
          r.down[r.id4(i, j, k, l)] = s;
        }
  return r;
}

Curvature riemann(const MetricField& m, const Point& p) { return curvature_from_connection(connection_jets(m, p)); }

Curvature curvature_from_endomorphisms(const Matrix& g, const std::vector<Matrix>& endo) {
  const int n = static_cast<int>(g.rows());
  if (endo.size() != sz(n * n)) throw DimensionError("curvature needs n^2 endomorphisms");
  Curvature r;
  r.n = n;
  r.g = g;
  r.up.assign(sz(n * n * n * n), 0.0);
  r.down.assign(r.up.size(), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Matrix& e = endo[sz(i * n + j)];
      const Matrix ge = g * e;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          r.up[r.id4(l, k, i, j)] = e(sz(l), sz(k));
          r.down[r.id4(i, j, k, l)] = ge(sz(l), sz(k));
        }
    }
  return r;
}

double Curvature::lowered(const Vector& a, const Vector& b, const Vector& c, const Vector& d) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (a[sz(i)] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (b[sz(j)] == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        if (c[sz(k)] == 0.0) continue;
        const double w = a[sz(i)] * b[sz(j)] * c[sz(k)];
        for (int l = 0; l < n; ++l) s += w * d[sz(l)] * down[id4(i, j, k, l)];
      }
    }
  }
  return s;
}

Matrix Curvature::endomorphism(int i, int j) const {
  Matrix e(sz(n), sz(n));
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) e(sz(l), sz(k)) = up[id4(l, k, i, j)];
  return e;
}

Matrix Curvature::endomorphism(const Vector& x, const Vector& y) const {
  Matrix e(sz(n), sz(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double w = x[sz(i)] * y[sz(j)];
      if (w == 0.0 || i == j) continue;
      e += w * endomorphism(i, j);
    }
  return e;
}

double Curvature::max_abs() const {
  double m = 0.0;
  for (double v : down) m = std::max(m, std::abs(v));
  return m;
}

Matrix wedge(const Matrix& g, const Vector& x, const Vector& y) {
  const Vector gx = g * x, gy = g * y;
  const std::size_t n = g.rows();
  Matrix w(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) w(a, b) = x[a] * gy[b] - y[a] * gx[b];
  return w;
}

double curvature_symmetry_residual(const Curvature& r) {
  const int n = r.n;
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = r.lowered(i, j, k, l);
          res = std::max({res, std::abs(v + r.lowered(j, i, k, l)), std::abs(v + r.lowered(i, j, l, k)),
                          std::abs(v - r.lowered(k, l, i, j))});
        }
  return res / std::max(1.0, r.max_abs());
}

double bianchi_residual(const Curvature& r) {
  const int n = r.n;
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          res = std::max(res, std::abs(r.lowered(i, j, k, l) + r.lowered(j, k, i, l) + r.lowered(k, i, j, l)));
  return res / std::max(1.0, r.max_abs());
}

namespace {
double cc_model(const Matrix& g, int i, int j, int k, int l) {
  return g(sz(j), sz(k)) * g(sz(i), sz(l)) - g(sz(i), sz(k)) * g(sz(j), sz(l));
}
}  // namespace

double constant_curvature_residual(const Curvature& r, double kappa) {
  const int n = r.n;
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          res = std::max(res, std::abs(r.lowered(i, j, k, l) - kappa * cc_model(r.g, i, j, k, l)));
  return res;
}

double constant_curvature_residual(const MetricField& m, const Point& p, double kappa) {
  return constant_curvature_residual(riemann(m, p), kappa);
}

CurvatureFit best_constant_curvature(const Curvature& r) {
  const int n = r.n;
  double rw = 0.0, ww = 0.0, wmax = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double w = cc_model(r.g, i, j, k, l);
          rw += r.lowered(i, j, k, l) * w;
          ww += w * w;
          wmax = std::max(wmax, std::abs(w));
        }
  if (ww == 0.0) return {0.0, r.max_abs()};
  // The max-norm residual is convex in kappa; refine the least-squares
  // estimate by golden-section search.
  const double k0 = rw / ww;
  const double span = std::abs(k0) + 2.0 * r.max_abs() / wmax + 1.0;
  double a = k0 - span, b = k0 + span;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = constant_curvature_residual(r, x1), f2 = constant_curvature_residual(r, x2);
  for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(a)); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = constant_curvature_residual(r, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = constant_curvature_residual(r, x2);
    }
  }
  const double k = 0.5 * (a + b);
  return {k, constant_curvature_residual(r, k)};
}

double metric_compatibility_residual(const MetricField& m, const Point& p) {
  const MetricJets j = metric_jets(m, p, 1);
  const Christoffel c = christoffel_from_jets(j, inverse(j.g));
  const int n = j.n;
  double res = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj) {
        double v = j.d(k, i, jj);
        for (int l = 0; l < n; ++l) v -= c(l, k, i) * j.g(sz(l), sz(jj)) + c(l, k, jj) * j.g(sz(i), sz(l));
        res = std::max(res, std::abs(v));
      }
  return res;
}

namespace {

struct WarpedPoint {
  int n = 0, n1 = 0, n2 = 0;
  double eps = 1.0;
  Warp w1{1, 0, 0}, w2{1, 0, 0};
  Point x1, x2;
  Matrix g;
};

WarpedPoint warped_point(const WarpedSpec& spec, const Point& p) {
  WarpedPoint w;
  w.n1 = spec.dim1();
  w.n2 = spec.dim2();
  w.n = 1 + w.n1 + w.n2;
  if (static_cast<int>(p.size()) != w.n) throw DimensionError("point does not match the warped product dimension");
  if (!(p[0] > spec.a && p[0] < spec.b)) throw OutsideDomain("s outside the warping interval");
  w.eps = spec.epsilon;
  w.g = Matrix(sz(w.n), sz(w.n));
  w.g(0, 0) = w.eps;
  if (w.n1 > 0) {
    w.w1 = warp_at(spec.f1, spec.coord, p[0]);
    w.x1 = sub_point(p, 1, sz(w.n1));
    const Matrix g1 = metric_eval(*spec.g1, w.x1);
    for (int a = 0; a < w.n1; ++a)
      for (int b = 0; b < w.n1; ++b) w.g(sz(1 + a), sz(1 + b)) = w.w1.f * w.w1.f * g1(sz(a), sz(b));
  }
  if (w.n2 > 0) {
    w.w2 = warp_at(spec.f2, spec.coord, p[0]);
    w.x2 = sub_point(p, sz(1 + w.n1), sz(w.n2));
    const Matrix g2 = metric_eval(*spec.g2, w.x2);
    const int o = 1 + w.n1;
    for (int a = 0; a < w.n2; ++a)
      for (int b = 0; b < w.n2; ++b) w.g(sz(o + a), sz(o + b)) = w.w2.f * w.w2.f * g2(sz(a), sz(b));
  }
  return w;
}

}  // namespace

Christoffel warped_connection_oracle(const WarpedSpec& spec, const Point& p) {
  const WarpedPoint w = warped_point(spec, p);
  Christoffel c;
  c.n = w.n;
  c.gamma.assign(sz(w.n * w.n * w.n), 0.0);
  auto factor = [&](const MetricField& gf, const Warp& f, const Point& x, int off, int dim) {
    const Christoffel cf = christoffel(gf, x);
    const Matrix g = metric_eval(gf, x);
    const double h = f.d1 / f.f;
    for (int a = 0; a < dim; ++a) {
      // nabla_{d0} X = nabla_X d0 = (f'/f) X
      c.at(off + a, 0, off + a) = h;
      c.at(off + a, off + a, 0) = h;
      for (int b = 0; b < dim; ++b) {
        // nabla_X X' = -eps (f'/f) g(X, X') d0 + nabla^i_X X', with g(X, X') = f^2 g_i(X, X')
        c.at(0, off + a, off + b) = -w.eps * h * f.f * f.f * g(sz(a), sz(b));
        for (int k = 0; k < dim; ++k) c.at(off + k, off + a, off + b) = cf(k, a, b);
      }
    }
  };
  if (w.n1 > 0) factor(*spec.g1, w.w1, w.x1, 1, w.n1);
  if (w.n2 > 0) factor(*spec.g2, w.w2, w.x2, 1 + w.n1, w.n2);
  return c;
}

Curvature warped_curvature_oracle(const WarpedSpec& spec, const Point& p) {
  const WarpedPoint w = warped_point(spec, p);
  const int n = w.n;
  std::optional<Curvature> r1, r2;
  if (w.n1 > 0) r1 = riemann(*spec.g1, w.x1);
  if (w.n2 > 0) r2 = riemann(*spec.g2, w.x2);
  // block(i): 0 for d0, 1 for N1, 2 for N2
  auto block = [&](int i) { return i == 0 ? 0 : (i <= w.n1 ? 1 : 2); };
  std::vector<Matrix> endo(sz(n * n), Matrix(sz(n), sz(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Matrix x = wedge(w.g, unit(n, i), unit(n, j));
      const int bi = block(i), bj = block(j);
      Matrix e(sz(n), sz(n));
      if (bi == 0) {
        const Warp& f = bj == 1 ? w.w1 : w.w2;
        e = (-w.eps * f.d2 / f.f) * x;
      } else if (bi == bj) {
        const Warp& f = bi == 1 ? w.w1 : w.w2;
        const Curvature& rf = bi == 1 ? *r1 : *r2;
        const int off = bi == 1 ? 1 : 1 + w.n1;
        e = (-w.eps * (f.d1 / f.f) * (f.d1 / f.f)) * x;
        const Matrix ef = rf.endomorphism(i - off, j - off);
        for (int a = 0; a < rf.n; ++a)
          for (int b = 0; b < rf.n; ++b) e(sz(off + a), sz(off + b)) += ef(sz(a), sz(b));
      } else {
        e = (-w.eps * (w.w1.d1 * w.w2.d1) / (w.w1.f * w.w2.f)) * x;
      }
      endo[sz(j * n + i)] = -1.0 * e;
      endo[sz(i * n + j)] = std::move(e);
    }
  return curvature_from_endomorphisms(w.g, endo);
}

Curvature cone_curvature_oracle(const MetricField& base, double c, const Point& p) {
  const int n = static_cast<int>(p.size()), m = n - 1;
  if (m != base.dim()) throw DimensionError("cone point does not match base dimension");
  if (!(p[0] > 0.0)) throw OutsideDomain("cone radius must be positive");
  const double r = p[0];
  const Point x = sub_point(p, 1, sz(m));
  const Matrix gb = metric_eval(base, x);
  const Curvature rb = riemann(base, x);
  Matrix g(sz(n), sz(n));
  g(0, 0) = c;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) g(sz(1 + a), sz(1 + b)) = r * r * gb(sz(a), sz(b));
  std::vector<Matrix> endo(sz(n * n), Matrix(sz(n), sz(n)));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      const Matrix eb = rb.endomorphism(a, b);
      const Matrix wb = wedge(gb, unit(m, a), unit(m, b));
      Matrix e(sz(n), sz(n));
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) e(sz(1 + l), sz(1 + k)) = eb(sz(l), sz(k)) - wb(sz(l), sz(k)) / c;
      endo[sz((1 + a) * n + 1 + b)] = std::move(e);
    }
  return curvature_from_endomorphisms(g, endo);
}

std::vector<NamedResidual> warped_cc_conditions(const WarpedSpec& spec, double kappa, const std::vector<double>& samples,
                                                std::optional<double> k1, std::optional<double> k2) {
  const int n1 = spec.dim1(), n2 = spec.dim2();
  const double eps = spec.epsilon, c = -eps * kappa;
  if (!k1 && spec.g1) k1 = spec.g1->constant_curvature;
  if (!k2 && spec.g2) k2 = spec.g2->constant_curvature;
  if (n1 > 1 && !k1) throw ConfigError("factor 1 curvature is required for the constant-curvature conditions");
  if (n2 > 1 && !k2) throw ConfigError("factor 2 curvature is required for the constant-curvature conditions");

  std::vector<NamedResidual> out;
  if (n1 > 0) out.push_back({"f1''/f1 = c", 0.0});
  if (n2 > 0) out.push_back({"f2''/f2 = c", 0.0});
  if (n1 > 0 && n2 > 0) out.push_back({"f1'f2'/(f1 f2) = c", 0.0});
  if (n1 > 1) out.push_back({"(f1'/f1)^2 - eps k1/f1^2 = c", 0.0});
  if (n2 > 1) out.push_back({"(f2'/f2)^2 - eps k2/f2^2 = c", 0.0});
  for (double s : samples) {
    const Warp f1 = n1 > 0 ? warp_at(spec.f1, spec.coord, s) : Warp{1, 0, 0};
    const Warp f2 = n2 > 0 ? warp_at(spec.f2, spec.coord, s) : Warp{1, 0, 0};
    std::size_t q = 0;
    auto upd = [&](double lhs) {
      out[q].residual = std::max(out[q].residual, std::abs(lhs - c));
      ++q;
    };
    if (n1 > 0) upd(f1.d2 / f1.f);
    if (n2 > 0) upd(f2.d2 / f2.f);
    if (n1 > 0 && n2 > 0) upd(f1.d1 * f2.d1 / (f1.f * f2.f));
    if (n1 > 1) upd((f1.d1 / f1.f) * (f1.d1 / f1.f) - eps * *k1 / (f1.f * f1.f));
    if (n2 > 1) upd((f2.d1 / f2.f) * (f2.d1 / f2.f) - eps * *k2 / (f2.f * f2.f));
  }
  return out;
}

double NablaRiemann::contract(const Vector& m, const Vector& a, const Vector& b, const Vector& c,
                              const Vector& d) const {
  double s = 0.0;
  for (int q = 0; q < n; ++q)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double w = m[sz(q)] * a[sz(i)] * b[sz(j)] * c[sz(k)];
          if (w == 0.0) continue;
          for (int l = 0; l < n; ++l) s += w * d[sz(l)] * (*this)(q, i, j, k, l);
        }
  return s;
}

double NablaRiemann::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

NablaRiemann covariant_deriv_riemann(const MetricField& m, const Point& p, double h) {
  const ConnectionJets cj = connection_jets(m, p);
  const Curvature r0 = curvature_from_connection(cj);
  const int n = cj.n;
  const std::size_t n4 = sz(n * n * n * n);
  NablaRiemann out;
  out.n = n;
  out.v.assign(sz(n) * n4, 0.0);
  for (int q = 0; q < n; ++q) {
    double hq = h * std::max(1.0, std::abs(p[sz(q)]));
    auto shifted = [&](double t) {
      Point x = p;
      x[sz(q)] += t;
      return x;
    };
    while (!(m.in_domain(shifted(hq)) && m.in_domain(shifted(-hq)))) {
      hq *= 0.5;
      if (hq < 1e-7) throw OutsideDomain("nabla R stencil leaves the domain");
    }
    auto central = [&](double t) {
      const Curvature rp = riemann(m, shifted(t)), rm = riemann(m, shifted(-t));
      std::vector<double> d(n4);
      for (std::size_t k = 0; k < n4; ++k) d[k] = (rp.down[k] - rm.down[k]) / (2.0 * t);
      return d;
    };
    const auto dh = central(hq), dh2 = central(hq / 2);
    for (std::size_t k = 0; k < n4; ++k) out.v[sz(q) * n4 + k] = (4.0 * dh2[k] - dh[k]) / 3.0;
  }
  const Christoffel& G = cj.gamma;
  for (int q = 0; q < n; ++q)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double corr = 0.0;
            for (int a = 0; a < n; ++a)
              corr += G(a, q, i) * r0.lowered(a, j, k, l) + G(a, q, j) * r0.lowered(i, a, k, l) +
                      G(a, q, k) * r0.lowered(i, j, a, l) + G(a, q, l) * r0.lowered(i, j, k, a);
            out.v[sz(q) * n4 + r0.id4(i, j, k, l)] -= corr;
          }
  return out;
}

VectorJet vector_jet(const VectorFieldExpr& x, const Point& p) {
  const int n = static_cast<int>(p.size());
  if (x.dim() != n) throw DimensionError("vector field dimension does not match the point");
  const auto seeds = seed_jets<Jet1>(p);
  const auto v = x.eval<Jet1>(seeds);
  VectorJet out{Vector(sz(n)), Matrix(sz(n), sz(n))};
  for (int i = 0; i < n; ++i) {
    out.value[sz(i)] = v[sz(i)].value();
    for (int j = 0; j < n; ++j) out.jac(sz(i), sz(j)) = v[sz(i)].grad(j);
  }
  return out;
}

Vector lie_bracket(const VectorJet& x, const VectorJet& y) { return y.jac * x.value - x.jac * y.value; }

Matrix lie_derivative_metric(const MetricField& m, const VectorFieldExpr& x, const Point& p) {
  const MetricJets j = metric_jets(m, p, 1);
  const VectorJet v = vector_jet(x, p);
  const int n = j.n;
  Matrix l(sz(n), sz(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += v.value[sz(k)] * j.d(k, a, b) + j.g(sz(k), sz(b)) * v.jac(sz(k), sz(a)) +
             j.g(sz(a), sz(k)) * v.jac(sz(k), sz(b));
      l(sz(a), sz(b)) = s;
    }
  return l;
}

Matrix covariant_derivative_vector(const MetricField& m, const VectorFieldExpr& x, const Point& p) {
  const Christoffel c = christoffel(m, p);
  const VectorJet v = vector_jet(x, p);
  Matrix d = v.jac;
  const int n = c.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) d(sz(i), sz(j)) += c(i, j, k) * v.value[sz(k)];
  return d;
}

EndoField endo_field_from_expressions(const std::vector<std::vector<std::string>>& comps,
                                      const std::vector<std::string>& coords) {
  const std::size_t n = coords.size();
  if (comps.size() != n) throw DimensionError("endomorphism field must be n x n");
  auto entries = std::make_shared<std::vector<BoundExpr>>();
  for (const auto& row : comps) {
    if (row.size() != n) throw DimensionError("endomorphism field must be n x n");
    for (const auto& c : row) entries->emplace_back(parse(c), coords);
  }
  return [entries, n](const Point& p) {
    const auto seeds = seed_jets<Jet1>(p);
    EndoJet j{Matrix(n, n), std::vector<Matrix>(n, Matrix(n, n))};
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const Jet1 v = (*entries)[a * n + b].eval(std::span<const Jet1>(seeds));
        j.value(a, b) = v.value();
        for (std::size_t m = 0; m < n; ++m) j.d[m](a, b) = v.grad(static_cast<int>(m));
      }
    return j;
  };
}

EndoJet covariant_derivative_jet(const MetricField& m, const VectorFieldExpr& x, const Point& p) {
  const ConnectionJets c = connection_jets(m, p);
  const int n = c.n;
  if (x.dim() != n) throw DimensionError("vector field dimension does not match the metric");
  const auto seeds = seed_jets<Jet2>(p);
  const auto v = x.eval<Jet2>(seeds);
  EndoJet out{Matrix(sz(n), sz(n)), std::vector<Matrix>(sz(n), Matrix(sz(n), sz(n)))};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = v[sz(i)].grad(j);
      for (int k = 0; k < n; ++k) s += c.gamma(i, j, k) * v[sz(k)].value();
      out.value(sz(i), sz(j)) = s;
      for (int q = 0; q < n; ++q) {
        double t = v[sz(i)].hess(q, j);
        for (int k = 0; k < n; ++k) t += c.d(q, i, j, k) * v[sz(k)].value() + c.gamma(i, j, k) * v[sz(k)].grad(q);
        out.d[sz(q)](sz(i), sz(j)) = t;
      }
    }
  return out;
}

EndoField covariant_derivative_field(const MetricField& m, const VectorFieldExpr& x) {
  return [m, x](const Point& p) { return covariant_derivative_jet(m, x, p); };
}

std::vector<Matrix> covariant_derivative_endo(const MetricField& m, const EndoJet& j, const Point& p) {
  const Christoffel c = christoffel(m, p);
  const int n = c.n;
  std::vector<Matrix> out;
  out.reserve(sz(n));
  for (int q = 0; q < n; ++q) {
    const Matrix a = c.along(unit(n, q));  // a^i_k = Gamma^i_qk
    out.push_back(j.d[sz(q)] + a * j.value - j.value * a);
  }
  return out;
}

std::vector<double> nijenhuis(const EndoJet& j) {
  const int n = static_cast<int>(j.value.rows());
  const Matrix& J = j.value;
  auto dJ = [&](int b, int a, int c) { return j.d[sz(b)](sz(a), sz(c)); };  // d_b J^a_c
  std::vector<double> out(sz(n * n * n), 0.0);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += J(sz(a), sz(c)) * (dJ(i, c, k) - dJ(k, c, i));
        for (int b = 0; b < n; ++b) s -= J(sz(b), sz(i)) * dJ(b, a, k) - J(sz(b), sz(k)) * dJ(b, a, i);
        out[sz((a * n + i) * n + k)] = s;
      }
  return out;
}

}  // namespace conehol
