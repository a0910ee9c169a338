#include "conehol/transport.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>

#include "conehol/errors.hpp"
#include "conehol/expr.hpp"
#include "conehol/random.hpp"

namespace conehol {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

Vector unit(std::size_t n, std::size_t i) {
  Vector e(n, 0.0);
  e[i] = 1.0;
  return e;
}

Matrix unvec(const Vector& v, std::size_t n) {
  Matrix a(n, n);
  std::copy(v.begin(), v.end(), a.data());
  return a;
}

double frob_dot(const Matrix& a, const Matrix& b) { return dot(a.storage(), b.storage()); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace

bool Curve::closed(double tol) const {
  const Point a = position(t0()), b = position(t1());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol * std::max(1.0, std::abs(a[i]))) return false;
  return true;
}

Curve segment_curve(const Point& a, const Point& b) { return polygon_curve({a, b}); }

Curve polygon_curve(const std::vector<Point>& vertices) {
  if (vertices.size() < 2) throw ConfigError("a polygon needs at least two vertices");
  auto v = std::make_shared<std::vector<Point>>(vertices);
  const std::size_t pieces = vertices.size() - 1;
  Curve c;
  for (std::size_t k = 0; k <= pieces; ++k) c.breaks.push_back(static_cast<double>(k));
  auto piece = [v, pieces](double t) {
    const auto k = std::min(pieces - 1, static_cast<std::size_t>(std::max(0.0, std::floor(t))));
    return k;
  };
  c.position = [v, piece](double t) {
    const std::size_t k = piece(t);
    const double s = t - static_cast<double>(k);
    return (1.0 - s) * (*v)[k] + s * (*v)[k + 1];
  };
  c.velocity = [v, piece](double t) {
    const std::size_t k = piece(t);
    return (*v)[k + 1] - (*v)[k];
  };
  return c;
}

Curve rectangle_loop(const Point& p, int i, int j, double h) {
  const std::size_t n = p.size();
  const Vector ei = h * unit(n, sz(i)), ej = h * unit(n, sz(j));
  return polygon_curve({p, p + ei, p + ei + ej, p + ej, p});
}

Curve expression_curve(const std::vector<std::string>& comps, const std::string& tvar, std::vector<double> breaks) {
  if (breaks.size() < 2 || !std::is_sorted(breaks.begin(), breaks.end()))
    throw ConfigError("curve breakpoints must be increasing and at least two");
  auto e = std::make_shared<std::vector<BoundExpr>>();
  for (const auto& c : comps) e->emplace_back(parse(c), std::vector<std::string>{tvar});
  Curve c;
  c.breaks = std::move(breaks);
  c.position = [e](double t) {
    Point x;
    for (const auto& b : *e) x.push_back(b.eval(std::span<const double>(&t, 1)));
    return x;
  };
  c.velocity = [e](double t) {
    const Jet1 s = Jet1::variable(t, 1, 0);
    Vector v;
    for (const auto& b : *e) v.push_back(b.eval(std::span<const Jet1>(&s, 1)).grad(0));
    return v;
  };
  return c;
}

namespace {

// dV/dt = -Gamma(x', .) V along one smooth piece with `steps` RK4 steps.
Matrix transport_piece(const MetricField& m, const Curve& c, double ta, double tb, int steps, Matrix v) {
  const double dt = (tb - ta) / steps;
  // Velocities jump at breaks; keep evaluations on this piece.
  const double last = std::nextafter(tb, ta);
  auto rhs = [&](double t, const Matrix& w) {
    t = std::min(t, last);
    const Point x = c.position(t);
    if (!m.in_domain(x)) throw OutsideDomain("transport curve leaves the domain of '" + m.name() + "'");
    const Matrix a = christoffel(m, x).along(c.velocity(t));
    return -1.0 * (a * w);
  };
  for (int s = 0; s < steps; ++s) {
    const double t = ta + s * dt;
    const Matrix k1 = rhs(t, v);
    const Matrix k2 = rhs(t + 0.5 * dt, v + (0.5 * dt) * k1);
    const Matrix k3 = rhs(t + 0.5 * dt, v + (0.5 * dt) * k2);
    const Matrix k4 = rhs(t + dt, v + dt * k3);
    v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

}  // namespace

TransportResult transport_matrix(const MetricField& m, const Curve& c, const TransportOptions& opt) {
  const Point a = c.position(c.t0()), b = c.position(c.t1());
  const Matrix ga = metric_eval(m, a), gb = metric_eval(m, b);
  const std::size_t n = a.size();
  const double scale = std::max(1.0, ga.max_abs());
  int steps = opt.steps;
  TransportResult best;
  for (int d = 0; d <= opt.max_doublings; ++d, steps *= 2) {
    Matrix v = Matrix::identity(n);
    for (std::size_t k = 0; k + 1 < c.breaks.size(); ++k)
      v = transport_piece(m, c, c.breaks[k], c.breaks[k + 1], steps, std::move(v));
    const double drift = (v.transpose() * gb * v - ga).max_abs() / scale;
    best = {v, steps, drift};
    if (drift < opt.drift_tol) return best;
  }
  throw NumericalError("parallel transport did not reach the inner-product tolerance (drift " +
                       std::to_string(best.drift) + ")");
}

Vector parallel_transport(const MetricField& m, const Curve& c, const Vector& v0, const TransportOptions& opt) {
  return transport_matrix(m, c, opt).map * v0;
}

Matrix loop_holonomy(const MetricField& m, const Curve& loop, const TransportOptions& opt) {
  if (!loop.closed()) throw ConfigError("holonomy needs a closed curve");
  return transport_matrix(m, loop, opt).map;
}

std::vector<Matrix> span_basis(const std::vector<Matrix>& mats, double rel_tol, double abs_floor) {
  if (mats.empty()) return {};
  const std::size_t n = mats.front().rows();
  std::vector<const Matrix*> keep;
  for (const Matrix& a : mats)
    if (a.frobenius() > abs_floor) keep.push_back(&a);
  if (keep.empty()) return {};
  // Right singular vectors of the stacked (generators x n^2) matrix.
  Matrix stack(keep.size(), n * n);
  for (std::size_t r = 0; r < keep.size(); ++r)
    std::copy(keep[r]->data(), keep[r]->data() + n * n, &stack(r, 0));
  const SVD s = svd(stack);
  const double thr = std::max(rel_tol * s.sigma.front(), abs_floor);
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < s.sigma.size() && s.sigma[k] > thr; ++k) out.push_back(unvec(s.v.col(k), n));
  return out;
}

HolonomySpan ambrose_singer_span(const MetricField& m, const Point& p, const SpanOptions& opt) {
  const std::size_t n = p.size();
  HolonomySpan span;
  span.base = p;
  span.g = metric_eval(m, p);
  std::vector<Matrix> raw;
  const Curvature r0 = riemann(m, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) raw.push_back(r0.endomorphism(static_cast<int>(i), static_cast<int>(j)));
  span.provenance.push_back("curvature at base point");

  Rng rng(opt.seed);
  for (int k = 0; k < opt.path_samples; ++k) {
    Vector dir(n);
    for (double& d : dir) d = rng.normal();
    dir = (1.0 / norm(dir)) * dir;
    double rad = opt.radius * (0.25 + 0.75 * rng.uniform());
    // Shrink until the radial segment stays inside the domain.
    for (int tries = 0; tries < 30; ++tries, rad *= 0.5) {
      const Point q = p + rad * dir;
      bool inside = true;
      for (int s = 1; s <= 16 && inside; ++s) inside = m.in_domain(p + (rad * s / 16.0) * dir);
      if (!inside) continue;
      const Matrix tau = transport_matrix(m, segment_curve(p, q), opt.transport).map;
      const Matrix tau_inv = inverse(tau);
      const Curvature rq = riemann(m, q);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          raw.push_back(tau_inv * rq.endomorphism(tau.col(i), tau.col(j)) * tau);
      span.provenance.push_back("transported curvature from radial path " + std::to_string(k));
      break;
    }
  }
  span.generators = span_basis(raw, opt.rank_tol, opt.abs_floor);
  return span;
}

double skewness_residual(const HolonomySpan& s) {
  double res = 0.0;
  for (const Matrix& a : s.generators) {
    const Matrix ga = s.g * a;
    res = std::max(res, (ga + ga.transpose()).max_abs() / std::max(a.max_abs(), 1e-300));
  }
  return res;
}

HolonomySpan lie_closure(const HolonomySpan& s, double tol) {
  HolonomySpan out = s;
  const std::size_t n = s.g.rows();
  const std::size_t cap = n * (n - 1) / 2;
  std::vector<Matrix>& basis = out.generators;
  basis = span_basis(basis, 1e-12, 0.0);
  bool grew = true;
  while (grew && basis.size() < cap) {
    grew = false;
    const std::size_t cur = basis.size();
    for (std::size_t a = 0; a < cur && basis.size() < cap; ++a)
      for (std::size_t b = a + 1; b < cur && basis.size() < cap; ++b) {
        Matrix c = commutator(basis[a], basis[b]);
        const double cn = c.frobenius();
        if (cn < 1e-12) continue;
        for (int pass = 0; pass < 2; ++pass)
          for (const Matrix& e : basis) c -= frob_dot(e, c) * e;
        const double rn = c.frobenius();
        if (rn > tol * cn) {
          basis.push_back((1.0 / rn) * c);
          grew = true;
        }
      }
  }
  if (out.generators.size() > s.generators.size()) out.provenance.push_back("commutator closure");
  return out;
}

std::string to_string(HolonomyClass c) {
  switch (c) {
    case HolonomyClass::Trivial: return "trivial";
    case HolonomyClass::Irreducible: return "irreducible";
    case HolonomyClass::IndecomposableReducible: return "indecomposable-reducible";
    case HolonomyClass::Decomposable: return "decomposable";
  }
  return "unknown";
}

namespace {

std::vector<Vector> columns(const Matrix& q) {
  std::vector<Vector> out;
  for (std::size_t j = 0; j < q.cols(); ++j) out.push_back(q.col(j));
  return out;
}

double invariance_residual(const std::vector<Matrix>& gens, const std::vector<Vector>& q) {
  double res = 0.0;
  for (const Matrix& a : gens) {
    const double an = std::max(a.frobenius(), 1e-300);
    for (const Vector& v : q) {
      Vector w = a * v;
      for (const Vector& b : q) w = w - dot(b, w) * b;
      res = std::max(res, norm(w) / an);
    }
  }
  return res;
}

// Smallest invariant subspace containing the seed vectors.
std::vector<Vector> cyclic_span(const std::vector<Matrix>& gens, const std::vector<Vector>& seeds, double tol) {
  std::vector<Vector> q = orthonormal_basis(seeds, tol);
  std::size_t done = 0;
  while (done < q.size()) {
    const Vector v = q[done++];
    for (const Matrix& a : gens) {
      const std::vector<Vector> more = orthonormal_basis([&] {
        std::vector<Vector> all = q;
        all.push_back(a * v);
        return all;
      }(), tol);
      if (more.size() > q.size()) q = more;
    }
  }
  return q;
}

// g-orthogonal complement of span(q).
std::vector<Vector> g_complement(const Matrix& g, const std::vector<Vector>& q) {
  const std::size_t n = g.rows();
  Matrix a(q.size(), n);
  for (std::size_t r = 0; r < q.size(); ++r) {
    const Vector gq = g * q[r];
    for (std::size_t c = 0; c < n; ++c) a(r, c) = gq[c];
  }
  const std::vector<Vector> out = null_space(a, 1e-10, 0.0);
  return orthonormal_basis(out, 1e-8);
}

// Matrices commuting with every generator.
std::vector<Matrix> commutant(const std::vector<Matrix>& gens, std::size_t n) {
  const std::size_t nn = n * n;
  Matrix normal(nn, nn);
  for (const Matrix& a : gens) {
    // L(C) = C A - A C as an nn x nn matrix acting on vec(C) (row-major).
    Matrix l(nn, nn);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t row = i * n + j;
        for (std::size_t k = 0; k < n; ++k) {
          l(row, i * n + k) += a(k, j);
          l(row, k * n + j) -= a(i, k);
        }
      }
    normal += l.transpose() * l;
  }
  const SymEigen e = sym_eigen(normal);
  const double top = std::max(1e-300, std::abs(e.values.back()));
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < nn; ++k)
    if (e.values[k] <= 1e-14 * top) out.push_back(unvec(e.vectors.col(k), n));
  return out;
}

}  // namespace

SubspaceReport describe_subspace(const HolonomySpan& s, const std::vector<Vector>& vectors, double rank_tol,
                                 double isotropy_tol) {
  const std::vector<Vector> q = orthonormal_basis(vectors, rank_tol);
  SubspaceReport r;
  r.dim = static_cast<int>(q.size());
  r.basis = Matrix::from_columns(q, s.g.rows());
  r.invariance_residual = invariance_residual(s.generators, q);
  if (q.empty()) return r;
  const Matrix gram = r.basis.transpose() * s.g * r.basis;
  r.isotropic = gram.max_abs() < isotropy_tol;
  const SymEigen e = sym_eigen(gram);
  double mx = 0.0, mn = 1e300;
  for (double v : e.values) {
    mx = std::max(mx, std::abs(v));
    mn = std::min(mn, std::abs(v));
  }
  r.gram_rank = 0;
  for (double v : e.values)
    if (std::abs(v) > rank_tol * std::max(mx, 1e-300) && std::abs(v) > isotropy_tol) ++r.gram_rank;
  r.nondegenerate = mx > 0.0 && mn > rank_tol * mx && !r.isotropic;
  return r;
}

ScanResult invariant_subspace_scan(const HolonomySpan& s, const ScanOptions& opt) {
  const std::size_t n = s.g.rows();
  ScanResult out;
  if (s.generators.empty()) {
    out.label = HolonomyClass::Trivial;
    return out;
  }
  const std::vector<Matrix>& gens = s.generators;
  std::vector<std::pair<std::vector<Vector>, std::string>> cand;

  for (std::size_t i = 0; i < n; ++i) cand.push_back({cyclic_span(gens, {unit(n, i)}, opt.rank_tol), "cyclic e" + std::to_string(i)});
  Rng rng(opt.seed);
  for (int k = 0; k < opt.random_vectors; ++k) {
    Vector v(n);
    for (double& x : v) x = rng.normal();
    cand.push_back({cyclic_span(gens, {v}, opt.rank_tol), "cyclic random " + std::to_string(k)});
  }
  // Common kernel and the image h.V.
  {
    Matrix stack(gens.size() * n, n);
    for (std::size_t g = 0; g < gens.size(); ++g)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) stack(g * n + i, j) = gens[g](i, j);
    const auto ker = null_space(stack, opt.rank_tol, 0.0);
    if (!ker.empty()) cand.push_back({cyclic_span(gens, ker, opt.rank_tol), "common kernel"});
    std::vector<Vector> img;
    for (const Matrix& a : gens)
      for (std::size_t j = 0; j < n; ++j) img.push_back(a.col(j));
    cand.push_back({cyclic_span(gens, img, opt.rank_tol), "image"});
  }
  // Eigenspaces and images of (C - lambda) for C in the commutant.
  {
    const auto comm = commutant(gens, n);
    std::vector<Matrix> probes = comm;
    if (comm.size() > 1) {
      Matrix mix(n, n);
      for (const Matrix& c : comm) mix += rng.normal() * c;
      probes.push_back(mix);
    }
    for (const Matrix& c : probes) {
      const double cs = std::max(c.max_abs(), 1e-300);
      for (const auto& lam : eigenvalues(c)) {
        if (std::abs(lam.imag()) > 1e-8 * cs) continue;
        Matrix shifted = c - lam.real() * Matrix::identity(n);
        const auto ker = null_space(shifted, 1e-8, 1e-10 * cs);
        if (!ker.empty() && ker.size() < n) cand.push_back({ker, "commutant eigenspace"});
        std::vector<Vector> img;
        for (std::size_t j = 0; j < n; ++j) img.push_back(shifted.col(j));
        auto ib = orthonormal_basis(img, 1e-8);
        if (!ib.empty() && ib.size() < n) cand.push_back({ib, "commutant image"});
      }
    }
  }

  auto add = [&](const std::vector<Vector>& q, const std::string& origin) {
    if (q.empty() || q.size() >= n) return;
    SubspaceReport r = describe_subspace(s, q, opt.rank_tol, opt.isotropy_tol);
    if (r.dim == 0 || r.dim >= static_cast<int>(n) || r.invariance_residual > opt.invariance_tol) return;
    const Matrix proj = r.basis * r.basis.transpose();
    for (const auto& e : out.subspaces)
      if (e.dim == r.dim && (e.basis * e.basis.transpose() - proj).max_abs() < 1e-6) return;
    r.origin = origin;
    out.subspaces.push_back(std::move(r));
  };
  for (const auto& [q, origin] : cand) add(q, origin);
  const std::size_t found = out.subspaces.size();
  for (std::size_t k = 0; k < found; ++k) {
    const auto q = columns(out.subspaces[k].basis);
    add(g_complement(s.g, q), "g-complement of " + out.subspaces[k].origin);
  }

  if (out.subspaces.empty()) {
    out.label = HolonomyClass::Irreducible;
    return out;
  }
  for (std::size_t k = 0; k < out.subspaces.size(); ++k)
    if (out.subspaces[k].nondegenerate) {
      out.label = HolonomyClass::Decomposable;
      out.witness = static_cast<int>(k);
      return out;
    }
  out.label = HolonomyClass::IndecomposableReducible;
  out.witness = 0;
  for (std::size_t k = 0; k < out.subspaces.size(); ++k)
    if (out.subspaces[k].isotropic) {
      out.witness = static_cast<int>(k);
      break;
    }
  return out;
}

AnnihilatedReport annihilated_vectors(const HolonomySpan& s, double rel_tol, double lightlike_tol) {
  const std::size_t n = s.g.rows();
  AnnihilatedReport rep;
  std::vector<Vector> ker;
  std::vector<double> sig;
  if (s.generators.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      ker.push_back(unit(n, i));
      sig.push_back(0.0);
    }
  } else {
    Matrix stack(s.generators.size() * n, n);
    for (std::size_t g = 0; g < s.generators.size(); ++g)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) stack(g * n + i, j) = s.generators[g](i, j);
    const SVD d = svd(stack);
    const double thr = rel_tol * std::max(d.sigma.front(), 1e-300);
    for (std::size_t j = 0; j < n; ++j)
      if (d.sigma[j] < thr) {
        ker.push_back(d.v.col(j));
        sig.push_back(d.sigma[j]);
      }
  }
  for (std::size_t k = 0; k < ker.size(); ++k) {
    const double q = bilinear(s.g, ker[k], ker[k]) / dot(ker[k], ker[k]);
    const std::string c = std::abs(q) < lightlike_tol ? "lightlike" : (q < 0 ? "timelike" : "spacelike");
    rep.kernel.push_back({ker[k], sig[k], q, c});
  }
  if (ker.empty()) return rep;
  // A null vector exists in the kernel iff g restricted to it is indefinite or degenerate.
  const Matrix b = Matrix::from_columns(ker, n);
  const SymEigen e = sym_eigen(b.transpose() * s.g * b);
  const double scale = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
  const double lo = e.values.front(), hi = e.values.back();
  if (std::abs(lo) <= lightlike_tol * std::max(scale, 1.0)) {
    rep.has_lightlike = true;
    rep.lightlike = b * e.vectors.col(0);
  } else if (std::abs(hi) <= lightlike_tol * std::max(scale, 1.0)) {
    rep.has_lightlike = true;
    rep.lightlike = b * e.vectors.col(e.values.size() - 1);
  } else if (lo < 0 && hi > 0) {
    rep.has_lightlike = true;
    const Vector u = (1.0 / std::sqrt(-lo)) * e.vectors.col(0);
    const Vector w = (1.0 / std::sqrt(hi)) * e.vectors.col(e.values.size() - 1);
    rep.lightlike = b * (u + w);
  }
  return rep;
}

double verify_parallel_field(const MetricField& m, const VectorFieldExpr& x, const std::vector<Point>& grid) {
  double res = 0.0;
  for (const Point& p : grid) {
    const SVD s = svd(covariant_derivative_vector(m, x, p));
    res = std::max(res, s.sigma.front());
  }
  return res;
}

double verify_parallel_distribution(const MetricField& m, const std::vector<VectorFieldExpr>& basis,
                                    const std::vector<Point>& grid) {
  if (basis.empty()) throw ConfigError("distribution needs at least one basis field");
  double res = 0.0;
  for (const Point& p : grid) {
    const std::size_t n = p.size();
    std::vector<Vector> b;
    for (const auto& f : basis) b.push_back(f.at(p));
    if (orthonormal_basis(b, 1e-8).size() != b.size())
      throw DegenerateMetric("distribution basis is linearly dependent at a grid point");
    const Matrix bm = Matrix::from_columns(b, n);
    const Matrix g = metric_eval(m, p);
    const Matrix gram = bm.transpose() * g * bm;
    // g-orthogonal projection when the distribution is non-degenerate,
    // Euclidean least squares otherwise.
    const bool nondeg = std::abs(determinant(gram)) > 1e-10 * std::max(1.0, gram.max_abs());
    const Matrix pairing = nondeg ? bm.transpose() * g : bm.transpose();
    const Matrix normal = nondeg ? gram : bm.transpose() * bm;
    const LU f = lu_decompose(normal);
    for (const auto& field : basis) {
      const Matrix d = covariant_derivative_vector(m, field, p);
      for (std::size_t k = 0; k < n; ++k) {
        const Vector w = d.col(k);
        const Vector coef = lu_solve(f, pairing * w);
        const Vector rest = w - bm * coef;
        res = std::max(res, max_abs(rest));
      }
    }
  }
  return res;
}

}  // namespace conehol
