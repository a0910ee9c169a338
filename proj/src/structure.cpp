#include "conehol/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "conehol/errors.hpp"
#include "conehol/parallel.hpp"

namespace conehol {

bool ResidualItem::pass() const {
  switch (kind) {
    case Kind::Max:
      return value <= tol;
    case Kind::Min:
      return value >= tol;
    case Kind::Info:
      return true;
  }
  return false;
}

void StructureReport::add(std::string name, double value, double tol, ResidualItem::Kind kind) {
  items.push_back({std::move(name), value, tol, kind});
}

bool StructureReport::pass() const {
  return std::all_of(items.begin(), items.end(), [](const ResidualItem& i) { return i.pass(); });
}

const ResidualItem* StructureReport::find(const std::string& name) const {
  for (const auto& i : items)
    if (i.name == name) return &i;
  return nullptr;
}

double StructureReport::operator[](const std::string& name) const {
  const ResidualItem* i = find(name);
  if (!i) throw Error("no residual named '" + name + "'");
  return i->value;
}

std::vector<std::string> StructureReport::failures() const {
  std::vector<std::string> out;
  for (const auto& i : items)
    if (!i.pass()) out.push_back(i.name);
  return out;
}

namespace {

using Kind = ResidualItem::Kind;

struct ItemSpec {
  const char* name;
  Kind kind = Kind::Max;
};

// Evaluate f at every grid point in parallel and reduce each slot by max (or
// min for Kind::Min). NaN wins so that broken points cannot hide.
template <class F>
void reduce_grid(StructureReport& rep, const std::vector<ItemSpec>& specs, const std::vector<double>& tols,
                 const std::vector<Point>& grid, F f) {
  if (grid.empty()) throw ConfigError("verification grid is empty");
  std::vector<std::vector<double>> vals(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) { vals[k] = f(grid[k]); });
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const bool take_min = specs[s].kind == Kind::Min;
    double acc = take_min ? INFINITY : 0.0;
    for (const auto& v : vals) {
      const double x = v[s];
      if (std::isnan(x) || std::isnan(acc))
        acc = NAN;
      else
        acc = take_min ? std::min(acc, x) : std::max(acc, x);
    }
    rep.add(specs[s].name, acc, tols[s], specs[s].kind);
  }
}

Vector unit(std::size_t n, std::size_t i) {
  Vector e(n, 0.0);
  e[i] = 1.0;
  return e;
}

Matrix row_matrix(const std::vector<Vector>& rows) {
  Matrix a(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = rows[i][j];
  return a;
}

// Euclidean orthonormal basis of the g-orthogonal complement of the vectors.
std::vector<Vector> g_complement(const Matrix& g, const std::vector<Vector>& vs) {
  std::vector<Vector> rows;
  for (const auto& v : vs) rows.push_back(g * v);
  return null_space(row_matrix(rows), 1e-10, 1e-14);
}

double gram_max(const Matrix& g, const std::vector<Vector>& vs) {
  double m = 0.0;
  for (const auto& a : vs)
    for (const auto& b : vs) m = std::max(m, std::abs(bilinear(g, a, b)));
  return m;
}

void check_field_dim(const MetricField& m, const VectorFieldExpr& x, const char* what) {
  if (x.dim() != m.dim())
    throw DimensionError(std::string(what) + " has " + std::to_string(x.dim()) + " components, expected " +
                         std::to_string(m.dim()));
}

// Gaussian elimination with partial pivoting on values; works for jets.
template <class T>
std::vector<T> solve_dense(std::vector<std::vector<T>> a, std::vector<T> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(value_of(a[r][c])) > std::abs(value_of(a[piv][c]))) piv = r;
    if (value_of(a[piv][c]) == 0.0) throw DegenerateMetric("singular linear system");
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const T f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

void check_para_sasaki_shape(const MetricField& m) {
  const int n = m.dim();
  const Signature s = m.declared_signature();
  if (n % 2 == 0 || s.neg != (n + 1) / 2 || s.pos != (n - 1) / 2)
    throw ConfigError("para-Sasaki structures need dimension 2n+1 and signature (n+1, n); got dimension " +
                      std::to_string(n) + " and signature (" + std::to_string(s.neg) + ", " +
                      std::to_string(s.pos) + ")");
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

StructureReport verify_para_sasaki(const ParaSasakiCandidate& c, double tol) {
  const MetricField& m = c.metric;
  check_para_sasaki_shape(m);
  check_field_dim(m, c.reeb, "Reeb field");
  const std::size_t n = static_cast<std::size_t>(m.dim());
  StructureReport rep;
  reduce_grid(rep, {{"unit-timelike"}, {"geodesic"}, {"killing"}, {"phi-squared"}, {"nabla-phi"}},
              std::vector<double>(5, tol), c.grid, [&](const Point& p) {
                const Matrix g = metric_eval(m, p);
                const Vector t = c.reeb.at(p);
                const Vector gt = g * t;
                const EndoJet jet = covariant_derivative_jet(m, c.reeb, p);
                const Matrix& phi = jet.value;
                Matrix sq = phi * phi - Matrix::identity(n);
                for (std::size_t i = 0; i < n; ++i)
                  for (std::size_t j = 0; j < n; ++j) sq(i, j) -= t[i] * gt[j];
                const auto dphi = covariant_derivative_endo(m, jet, p);
                double e = 0.0;
                for (std::size_t u = 0; u < n; ++u)
                  for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                      e = std::max(e, std::abs(dphi[u](i, j) + g(u, j) * t[i] - gt[j] * (i == u ? 1.0 : 0.0)));
                return std::vector<double>{std::abs(dot(t, gt) + 1.0), max_abs(phi * t),
                                           lie_derivative_metric(m, c.reeb, p).max_abs(), sq.max_abs(), e};
              });
  return rep;
}

ContactSplit contact_split(const MetricField& m, const VectorFieldExpr& t, const Point& p) {
  const std::size_t n = static_cast<std::size_t>(m.dim());
  const Matrix g = metric_eval(m, p);
  const Matrix phi = covariant_derivative_vector(m, t, p);
  const auto e = g_complement(g, {t.at(p)});
  ContactSplit out;
  for (int sign : {1, -1}) {
    const Matrix proj = 0.5 * (Matrix::identity(n) + static_cast<double>(sign) * phi);
    std::vector<Vector> img;
    // e is orthonormal, so images of norm below the threshold belong to the
    // other eigenspace.
    for (const auto& v : e) {
      Vector w = proj * v;
      if (norm(w) > 1e-6) img.push_back(std::move(w));
    }
    (sign > 0 ? out.plus : out.minus) = orthonormal_basis(img, 1e-6);
  }
  return out;
}

// d theta_ab = d_a theta_b - d_b theta_a with theta_b = g_bc T^c, i.e.
// d theta(X, Y) = X theta(Y) - Y theta(X) - theta([X, Y]).
Matrix contact_dtheta(const MetricField& m, const VectorFieldExpr& t, const Point& p) {
  const int n = m.dim();
  const MetricJets mj = metric_jets(m, p, 1);
  const VectorJet tj = vector_jet(t, p);
  Matrix dth(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  auto d_theta = [&](int a, int b) {
    double s = 0.0;
    for (int c = 0; c < n; ++c) {
      const auto uc = static_cast<std::size_t>(c);
      s += mj.d(a, b, c) * tj.value[uc] + mj.g(static_cast<std::size_t>(b), uc) * tj.jac(uc, static_cast<std::size_t>(a));
    }
    return s;
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      dth(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) = d_theta(a, b) - d_theta(b, a);
  return dth;
}

StructureReport contact_form_checks(const ParaSasakiCandidate& c, double tol) {
  const MetricField& m = c.metric;
  check_para_sasaki_shape(m);
  check_field_dim(m, c.reeb, "Reeb field");
  const std::size_t n = static_cast<std::size_t>(m.dim());
  const std::size_t half = (n - 1) / 2;
  StructureReport rep;
  reduce_grid(rep,
              {{"dtheta-pm"}, {"dtheta-T"}, {"levi-form"}, {"metric-identity"}, {"contact-volume", Kind::Min},
               {"dtheta-max", Kind::Info}},
              {tol, tol, tol, tol, 1e-8, 0.0}, c.grid, [&](const Point& p) {
                const Matrix g = metric_eval(m, p);
                const Vector t = c.reeb.at(p);
                const Vector theta = g * t;
                const Matrix phi = covariant_derivative_vector(m, c.reeb, p);
                const Matrix dth = contact_dtheta(m, c.reeb, p);
                const ContactSplit sp = contact_split(m, c.reeb, p);
                if (sp.plus.size() != half || sp.minus.size() != half)
                  throw VerificationError("eigendistributions of phi on T^perp have dimensions " +
                                          std::to_string(sp.plus.size()) + " and " + std::to_string(sp.minus.size()) +
                                          ", expected " + std::to_string(half));
                double pm = 0.0;
                for (const auto& a : sp.plus)
                  for (const auto& b : sp.minus) pm = std::max(pm, std::abs(bilinear(dth, a, b) - 2.0 * bilinear(g, a, b)));
                const Matrix dphi = dth * phi;
                const auto e = g_complement(g, {t});
                double levi = 0.0;
                for (const auto& a : e)
                  for (const auto& b : e) levi = std::max(levi, std::abs(bilinear(dphi, a, b) + 2.0 * bilinear(g, a, b)));
                Matrix id = g + 0.5 * dphi;
                for (std::size_t i = 0; i < n; ++i)
                  for (std::size_t j = 0; j < n; ++j) id(i, j) += theta[i] * theta[j];
                Matrix bord(n + 1, n + 1);
                for (std::size_t i = 0; i < n; ++i) {
                  for (std::size_t j = 0; j < n; ++j) bord(i, j) = dth(i, j);
                  bord(i, n) = theta[i];
                  bord(n, i) = -theta[i];
                }
                return std::vector<double>{pm, max_abs(dth.transpose() * t), levi, id.max_abs(),
                                           std::abs(determinant(bord)), dth.max_abs()};
              });
  return rep;
}

VectorFieldExpr lift_to_cone(const MetricField& cone, const MetricField& base, const VectorFieldExpr& t) {
  check_field_dim(base, t, "vector field");
  if (cone.dim() != base.dim() + 1) throw DimensionError("cone and base dimensions do not match");
  std::map<std::string, Expr> rename;
  for (int i = 0; i < base.dim(); ++i)
    rename[base.coords()[static_cast<std::size_t>(i)]] = parse(cone.coords()[static_cast<std::size_t>(i + 1)]);
  std::vector<Expr> comps{Expr::constant(0.0)};
  for (const auto& e : t.components()) comps.push_back(substitute(e, rename));
  return VectorFieldExpr(comps, cone.coords());
}

ConeStructure sasaki_to_cone_J(const ParaSasakiCandidate& c, const std::vector<double>& radii, double tol) {
  const StructureReport base = verify_para_sasaki(c, tol);
  if (!base.pass()) throw VerificationError("para-Sasaki conditions fail: " + join(base.failures()));
  ConeStructure out;
  out.cone = make_cone(c.metric);
  out.reeb = lift_to_cone(out.cone, c.metric, c.reeb);
  out.J = covariant_derivative_field(out.cone, out.reeb);
  for (double r : radii) {
    if (!(r > 0.0)) throw ConfigError("cone radii must be positive");
    for (const auto& x : c.grid) {
      Point q{r};
      q.insert(q.end(), x.begin(), x.end());
      out.grid.push_back(std::move(q));
    }
  }
  const std::size_t n = static_cast<std::size_t>(out.cone.dim());
  const std::size_t half = (n - 2) / 2;
  reduce_grid(out.report,
              {{"J-radial"}, {"J-reeb"}, {"J-contact"}, {"J-squared"}, {"anti-isometry"}, {"nabla-J"}, {"V-isotropy"},
               {"V-dimensions"}},
              {tol, tol, tol, tol, tol, tol, tol, 0.5}, out.grid, [&](const Point& q) {
                const double r = q[0];
                const Point x(q.begin() + 1, q.end());
                const Matrix g = metric_eval(out.cone, q);
                const EndoJet jet = covariant_derivative_jet(out.cone, out.reeb, q);
                const Matrix& J = jet.value;
                const Vector t = out.reeb.at(q);
                const Vector e0 = unit(n, 0);
                const Matrix phi = covariant_derivative_vector(c.metric, c.reeb, x);
                double jc = 0.0;
                for (const auto& v : g_complement(metric_eval(c.metric, x), {c.reeb.at(x)})) {
                  Vector lv{0.0};
                  lv.insert(lv.end(), v.begin(), v.end());
                  const Vector pv = phi * v;
                  Vector lp{0.0};
                  lp.insert(lp.end(), pv.begin(), pv.end());
                  jc = std::max(jc, max_abs(J * lv - lp));
                }
                double nj = 0.0;
                for (const auto& d : covariant_derivative_endo(out.cone, jet, q)) nj = std::max(nj, d.max_abs());
                const ContactSplit sp = contact_split(c.metric, c.reeb, x);
                auto lift = [&](const std::vector<Vector>& e, double sign) {
                  std::vector<Vector> v;
                  Vector rt = sign * t;
                  rt[0] = r;
                  v.push_back(rt);
                  for (const auto& b : e) {
                    Vector l{0.0};
                    l.insert(l.end(), b.begin(), b.end());
                    v.push_back(l);
                  }
                  return v;
                };
                const auto vp = lift(sp.plus, 1.0), vm = lift(sp.minus, -1.0);
                const double dims = std::abs(static_cast<double>(sp.plus.size()) - static_cast<double>(half)) +
                                    std::abs(static_cast<double>(sp.minus.size()) - static_cast<double>(half));
                return std::vector<double>{max_abs(J * e0 - (1.0 / r) * t),
                                           max_abs(J * t - r * e0),
                                           jc,
                                           (J * J - Matrix::identity(n)).max_abs(),
                                           (J.transpose() * g * J + g).max_abs(),
                                           nj,
                                           std::max(gram_max(g, vp), gram_max(g, vm)),
                                           dims};
              });
  return out;
}

StructureReport verify_para_kahler(const MetricField& m, const EndoField& J, const std::vector<Point>& grid,
                                   double tol) {
  const int n = m.dim();
  const auto un = static_cast<std::size_t>(n);
  StructureReport rep;
  reduce_grid(rep, {{"J-squared"}, {"eigen-balance"}, {"anti-isometry"}, {"nabla-J"}, {"nijenhuis"}, {"d-omega"}},
              {tol, 0.5, tol, tol, tol, tol}, grid, [&](const Point& p) {
                EndoJet jet;
                try {
                  jet = J(p);
                } catch (const Error& e) {
                  throw VerificationError(std::string("endomorphism field is not defined on the grid: ") + e.what());
                }
                if (jet.value.rows() != un || jet.value.cols() != un || jet.d.size() != un)
                  throw DimensionError("endomorphism field has the wrong size");
                const Matrix& j = jet.value;
                const MetricJets mj = metric_jets(m, p, 1);
                const Matrix& g = mj.g;
                const Matrix id = Matrix::identity(un);
                const double dp = static_cast<double>(null_space(j - id, 1e-8, 1e-10).size());
                const double dm = static_cast<double>(null_space(j + id, 1e-8, 1e-10).size());
                double nj = 0.0;
                for (const auto& d : covariant_derivative_endo(m, jet, p)) nj = std::max(nj, d.max_abs());
                double nh = 0.0;
                for (double v : nijenhuis(jet)) nh = std::max(nh, std::abs(v));
                // omega_ij = g(J d_i, d_j) = J^k_i g_kj.
                auto d_omega = [&](int a, int i, int k) {
                  double s = 0.0;
                  for (int l = 0; l < n; ++l) {
                    const auto ul = static_cast<std::size_t>(l);
                    s += jet.d[static_cast<std::size_t>(a)](ul, static_cast<std::size_t>(i)) *
                             g(ul, static_cast<std::size_t>(k)) +
                         j(ul, static_cast<std::size_t>(i)) * mj.d(a, l, k);
                  }
                  return s;
                };
                double dw = 0.0;
                for (int a = 0; a < n; ++a)
                  for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                      dw = std::max(dw, std::abs(d_omega(a, b, c) + d_omega(b, c, a) + d_omega(c, a, b)));
                return std::vector<double>{(j * j - id).max_abs(),
                                           std::abs(dp - dm) + std::abs(dp + dm - static_cast<double>(n)),
                                           (j.transpose() * g * j + g).max_abs(),
                                           nj,
                                           nh,
                                           dw};
              });
  return rep;
}

double para_sasaki_curvature_residual(const MetricField& m, const VectorFieldExpr& t, const Point& p,
                                      int omega_sign) {
  const Matrix g = metric_eval(m, p);
  const Matrix phi = covariant_derivative_vector(m, t, p);
  const Curvature R = riemann(m, p);
  const auto e = g_complement(g, {t.at(p)});
  double res = 0.0;
  for (const auto& x : e)
    for (const auto& y : e) {
      const Matrix rxy = R.endomorphism(x, y);
      const Vector px = phi * x, py = phi * y;
      const double omega = omega_sign * bilinear(g, px, y);
      for (const auto& z : e) {
        const Vector r1 = bilinear(g, py, z) * px - bilinear(g, px, z) * py;
        res = std::max(res, max_abs(rxy * z - r1 + 2.0 * omega * (phi * z)));
      }
    }
  return res;
}

double para_sasaki_nabla_R_component(const ParaSasakiExample& ex, const Point& p) {
  const MetricField& m = ex.metric;
  const int n = ex.n;
  const auto dim = static_cast<std::size_t>(m.dim());
  const auto x = seed_jets<Jet1>(p);
  std::vector<Jet1> u;
  for (const auto& e : ex.u) u.push_back(BoundExpr(e, m.coords()).eval(std::span<const Jet1>(x)));
  Matrix h(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 0.5 * u[static_cast<std::size_t>(i)].grad(1 + j);
  const Matrix hinv = inverse(h);
  const Vector t = ex.reeb.at(p);
  Vector y(dim, 0.0);
  for (int j = 0; j < n; ++j) {
    const double c = hinv(0, static_cast<std::size_t>(j));
    y = y + (c * u[static_cast<std::size_t>(j)].value()) * t;
    y[static_cast<std::size_t>(1 + n + j)] += c;
  }
  const Vector d1 = unit(dim, 1);
  return covariant_deriv_riemann(m, p).contract(d1, t, y, d1, y);
}

AlphaSplitResult extract_alpha_split(const MetricField& cone, const std::vector<VectorFieldExpr>& v1,
                                     const std::vector<VectorFieldExpr>& v2, const std::vector<Point>& grid,
                                     double tol) {
  const int n = cone.dim();
  const auto un = static_cast<std::size_t>(n);
  if (v1.empty() || v2.empty()) throw DimensionError("both distributions need at least one field");
  if (v1.size() + v2.size() != un)
    throw DimensionError("distribution ranks " + std::to_string(v1.size()) + " + " + std::to_string(v2.size()) +
                         " do not add up to " + std::to_string(n));
  for (const auto& v : v1) check_field_dim(cone, v, "V1 field");
  for (const auto& v : v2) check_field_dim(cone, v, "V2 field");
  const std::size_t k1 = v1.size();
  std::vector<VectorFieldExpr> all = v1;
  all.insert(all.end(), v2.begin(), v2.end());

  AlphaSplitResult out;
  out.alpha.resize(grid.size());
  out.X.resize(grid.size());
  std::vector<std::vector<double>> vals(grid.size());
  const std::vector<ItemSpec> specs{{"decomposition"}, {"orthogonality"}, {"alpha-norm"},   {"X-norm"},
                                    {"radial-alpha"},  {"E1-alpha"},      {"E2-alpha"},     {"nabla-E1"},
                                    {"nabla-E2"},      {"nabla-radial"},  {"alpha-ode"},    {"gradient"}};
  std::vector<Point> idx(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) idx[k] = {static_cast<double>(k)};
  reduce_grid(out.report, specs, std::vector<double>(specs.size(), tol), idx, [&](const Point& kp) {
    const auto k = static_cast<std::size_t>(kp[0]);
    const Point& p = grid[k];
    const double r = p[0];
    const auto x = seed_jets<Jet1>(p);
    std::vector<std::vector<Jet1>> cols;
    Matrix bv(un, un);
    for (std::size_t a = 0; a < un; ++a) {
      cols.push_back(all[a].eval<Jet1>(x));
      for (std::size_t i = 0; i < un; ++i) bv(i, a) = cols[a][i].value();
    }
    const SVD sv = svd(bv);
    if (!(sv.sigma.back() > 1e-10 * sv.sigma.front()))
      throw DegenerateMetric("distributions are not complementary at grid point " + std::to_string(k));
    std::vector<std::vector<Jet1>> a(un, std::vector<Jet1>(un));
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j) a[i][j] = cols[j][i];
    std::vector<Jet1> rhs(un, Jet1(0.0, n));
    rhs[0] = Jet1(1.0, n);
    const auto coef = solve_dense(a, rhs);
    std::vector<Jet1> x1(un, Jet1(0.0, n)), x2(un, Jet1(0.0, n));
    for (std::size_t b = 0; b < un; ++b)
      for (std::size_t i = 0; i < un; ++i) (b < k1 ? x1 : x2)[i] += coef[b] * cols[b][i];
    const Jet1 alpha = x1[0];
    Vector X1(un), X2(un), X(un, 0.0), da(un);
    for (std::size_t i = 0; i < un; ++i) {
      X1[i] = x1[i].value();
      X2[i] = x2[i].value();
      da[i] = alpha.grad(static_cast<int>(i));
      if (i > 0) X[i] = X1[i];
    }
    const double al = alpha.value();
    out.alpha[k] = al;
    out.X[k] = X;
    const Matrix g = metric_eval(cone, p);
    const Christoffel gam = christoffel(cone, p);
    // (nabla X)^i_j = d_j X^i + Gamma^i_jk X^k; X^0 = 0 identically.
    Matrix gx(un, un);
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j) {
        double s = 0.0;
        for (std::size_t kk = 0; kk < un; ++kk)
          s += gam(static_cast<int>(i), static_cast<int>(j), static_cast<int>(kk)) * X[kk];
        gx(i, j) = s;
      }
    Matrix nabla_x(un, un);
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j)
        nabla_x(i, j) = (i > 0 ? x1[i].grad(static_cast<int>(j)) : 0.0) + gx(i, j);

    double orth = 0.0;
    for (std::size_t i = 0; i < k1; ++i)
      for (std::size_t j = k1; j < un; ++j) orth = std::max(orth, std::abs(bilinear(g, bv.col(i), bv.col(j))));
    Vector e0(un, 0.0);
    e0[0] = 1.0;

    // E_i = V_i intersected with the g-complement of X_i.
    auto sub_basis = [&](std::size_t lo, std::size_t hi, const Vector& xi) {
      std::vector<Vector> b;
      for (std::size_t c = lo; c < hi; ++c) b.push_back(bv.col(c));
      Matrix row(1, b.size());
      const Vector gx_i = g * xi;
      for (std::size_t c = 0; c < b.size(); ++c) row(0, c) = dot(gx_i, b[c]);
      std::vector<Vector> out_b;
      for (const auto& w : null_space(row, 1e-10, 1e-14)) {
        Vector y(un, 0.0);
        for (std::size_t c = 0; c < b.size(); ++c) y = y + w[c] * b[c];
        out_b.push_back((1.0 / norm(y)) * y);
      }
      return out_b;
    };
    double ya1 = 0.0, ya2 = 0.0, ny1 = 0.0, ny2 = 0.0;
    for (const auto& y : sub_basis(0, k1, X1)) {
      ya1 = std::max(ya1, std::abs(dot(y, da)));
      ny1 = std::max(ny1, max_abs(nabla_x * y - ((1.0 - al) / r) * y));
    }
    for (const auto& y : sub_basis(k1, un, X2)) {
      ya2 = std::max(ya2, std::abs(dot(y, da)));
      ny2 = std::max(ny2, max_abs(nabla_x * y + (al / r) * y));
    }
    // Base metric g_base = g_cone / r^2 on the tangent block.
    const std::size_t m = un - 1;
    Matrix gb(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) gb(i, j) = g(i + 1, j + 1) / (r * r);
    const Vector dab(da.begin() + 1, da.end());
    const Vector grad = inverse(gb) * dab;
    double gr = 0.0;
    for (std::size_t i = 0; i < m; ++i) gr = std::max(gr, std::abs(r * X[i + 1] - 0.5 * grad[i]));
    return std::vector<double>{max_abs(X1 + X2 - e0),
                               orth,
                               std::abs(bilinear(g, X1, X1) - al),
                               std::abs(bilinear(g, X, X) - (al - al * al)),
                               std::abs(da[0]),
                               ya1,
                               ya2,
                               ny1,
                               ny2,
                               max_abs(nabla_x * e0),
                               std::abs(r * dot(X, da) - 2.0 * (al - al * al)),
                               gr};
  });
  return out;
}

double verify_isometry(const IsometrySpec& s, const std::vector<Point>& grid) {
  const auto n = static_cast<std::size_t>(s.source.dim());
  const auto m = static_cast<std::size_t>(s.target.dim());
  if (s.map.size() != m)
    throw DimensionError("map has " + std::to_string(s.map.size()) + " components, target has dimension " +
                         std::to_string(m));
  if (grid.empty()) throw ConfigError("verification grid is empty");
  std::vector<BoundExpr> comps;
  for (const auto& e : s.map) comps.emplace_back(e, s.source.coords());
  std::vector<double> res(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t k) {
    const Point& p = grid[k];
    if (p.size() != n) throw DimensionError("grid point has the wrong dimension");
    const auto x = seed_jets<Jet1>(p);
    Point q(m);
    Matrix jac(m, n);
    for (std::size_t a = 0; a < m; ++a) {
      const Jet1 v = comps[a].eval(std::span<const Jet1>(x));
      q[a] = v.value();
      for (std::size_t i = 0; i < n; ++i) jac(a, i) = v.grad(static_cast<int>(i));
    }
    if (!s.target.in_domain(q)) throw OutsideDomain("map leaves the target domain at grid point " + std::to_string(k));
    const Matrix pull = jac.transpose() * metric_eval(s.target, q) * jac;
    res[k] = (pull - metric_eval(s.source, p)).max_abs();
  });
  double worst = 0.0;
  for (double r : res) worst = std::isnan(r) || std::isnan(worst) ? NAN : std::max(worst, r);
  return worst;
}

StructureReport verify_three_sasaki(const MetricField& m, const std::vector<VectorFieldExpr>& t,
                                    const std::vector<Point>& grid, const std::vector<double>& radii, double tol) {
  if (t.size() != 3) throw DimensionError("a para-3-Sasaki structure needs exactly three fields");
  for (const auto& f : t) check_field_dim(m, f, "Reeb field");
  StructureReport rep;
  reduce_grid(rep,
              {{"orthonormality"}, {"killing"}, {"nabla-T2-T1"}, {"bracket-12"}, {"bracket-13"}, {"bracket-23"},
               {"anticommute"}},
              std::vector<double>(7, tol), grid, [&](const Point& p) {
                const Matrix g = metric_eval(m, p);
                std::vector<Vector> tv;
                std::vector<VectorJet> tj;
                std::vector<Matrix> phi;
                double kill = 0.0;
                for (const auto& f : t) {
                  tj.push_back(vector_jet(f, p));
                  tv.push_back(tj.back().value);
                  phi.push_back(covariant_derivative_vector(m, f, p));
                  kill = std::max(kill, lie_derivative_metric(m, f, p).max_abs());
                }
                const double expect[3] = {-1.0, -1.0, 1.0};
                double on = 0.0;
                for (std::size_t i = 0; i < 3; ++i)
                  for (std::size_t j = 0; j < 3; ++j)
                    on = std::max(on, std::abs(bilinear(g, tv[i], tv[j]) - (i == j ? expect[i] : 0.0)));
                const Matrix ac = phi[0] * phi[1] + phi[1] * phi[0];
                double anti = 0.0;
                for (const auto& e : g_complement(g, tv)) anti = std::max(anti, max_abs(ac * e));
                return std::vector<double>{on,
                                           kill,
                                           max_abs(phi[0] * tv[1] - tv[2]),
                                           max_abs(lie_bracket(tj[0], tj[1]) + 2.0 * tv[2]),
                                           max_abs(lie_bracket(tj[0], tj[2]) + 2.0 * tv[1]),
                                           max_abs(lie_bracket(tj[1], tj[2]) - 2.0 * tv[0]),
                                           anti};
              });
  const MetricField cone = make_cone(m);
  std::vector<VectorFieldExpr> lifted;
  for (const auto& f : t) lifted.push_back(lift_to_cone(cone, m, f));
  std::vector<Point> cg;
  for (double r : radii)
    for (const auto& x : grid) {
      Point q{r};
      q.insert(q.end(), x.begin(), x.end());
      cg.push_back(std::move(q));
    }
  reduce_grid(rep, {{"cone-J3"}}, {tol}, cg, [&](const Point& q) {
    std::vector<Matrix> j;
    for (const auto& f : lifted) j.push_back(covariant_derivative_vector(cone, f, q));
    return std::vector<double>{(j[2] - j[0] * j[1]).max_abs()};
  });
  return rep;
}

}  // namespace conehol
