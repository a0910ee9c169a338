#include "conehol/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "conehol/errors.hpp"
#include "conehol/random.hpp"

namespace conehol {

MetricField::MetricField(std::string name, std::vector<std::string> coords, Signature sig, DomainPredicate domain,
                         Evaluators ev)
    : name_(std::move(name)), coords_(std::move(coords)), sig_(sig), domain_(std::move(domain)), ev_(std::move(ev)) {
  if (dim() > kMaxDim) throw DimensionError("metric dimension exceeds " + std::to_string(kMaxDim));
  if (sig_.dim() != dim())
    throw DimensionError("declared signature does not match dimension of '" + name_ + "'");
  if (!ev_.value) throw Error("metric '" + name_ + "' needs a value evaluator");
}

MetricField MetricField::from_expressions(std::string name, std::vector<std::string> coords,
                                          const std::vector<std::vector<Expr>>& components, Signature sig,
                                          DomainPredicate domain) {
  const std::size_t n = coords.size();
  if (components.size() != n) throw DimensionError("metric component matrix has wrong size");
  auto comps = std::make_shared<std::vector<BoundExpr>>();
  for (std::size_t i = 0; i < n; ++i) {
    if (components[i].size() != n) throw DimensionError("metric component matrix has wrong size");
    for (std::size_t j = 0; j < n; ++j) comps->emplace_back(components[i][j], coords);
  }
  auto gen = [comps, n](auto x, auto out) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        out[i * n + j] = (*comps)[i * n + j].eval(x);
        out[j * n + i] = out[i * n + j];
      }
  };
  return generic(std::move(name), std::move(coords), sig, std::move(domain), gen);
}

MetricField MetricField::from_values(std::string name, std::vector<std::string> coords, Signature sig,
                                     DomainPredicate domain, Evaluator<double> value) {
  Evaluators ev;
  ev.value = std::move(value);
  return MetricField(std::move(name), std::move(coords), sig, std::move(domain), std::move(ev));
}

bool MetricField::in_domain(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return !domain_ || domain_(x);
}

void MetricField::set_coords(std::vector<std::string> c) {
  if (c.size() != coords_.size()) throw DimensionError("coordinate rename changes dimension");
  coords_ = std::move(c);
}

namespace {

Matrix raw_eval(const MetricField& m, const Point& p) {
  const std::size_t n = p.size();
  Matrix g(n, n);
  m.eval_into<double>(p, std::span<double>(g.data(), n * n));
  return g;
}

void check_point(const MetricField& m, const Point& p) {
  if (static_cast<int>(p.size()) != m.dim())
    throw DimensionError("point has dimension " + std::to_string(p.size()) + ", metric '" + m.name() + "' has " +
                         std::to_string(m.dim()));
  if (!m.in_domain(p)) throw OutsideDomain("point outside the domain of '" + m.name() + "'");
}

void check_matrix(const MetricField& m, const Matrix& g) {
  const std::size_t n = g.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(g(i, j))) throw NumericalError("non-finite metric component in '" + m.name() + "'");
      if (std::abs(g(i, j) - g(j, i)) > 1e-12 * std::max(1.0, std::abs(g(i, j))))
        throw Error("metric '" + m.name() + "' is not symmetric");
    }
  if (std::abs(determinant(g)) <= m.degeneracy_tol)
    throw DegenerateMetric("metric '" + m.name() + "' is degenerate at this point");
}

}  // namespace

Matrix metric_eval(const MetricField& m, const Point& p) {
  check_point(m, p);
  Matrix g = raw_eval(m, p);
  check_matrix(m, g);
  return g;
}

MetricJets metric_jets(const MetricField& m, const Point& p, int order) {
  if (!m.has_jets()) return metric_jets_fd(m, p, order);
  check_point(m, p);
  const int n = m.dim();
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  MetricJets out;
  out.n = n;
  out.g = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  out.dg.assign(nn * static_cast<std::size_t>(n), 0.0);
  if (order >= 2) {
    out.d2g.assign(nn * nn, 0.0);
    const auto x = seed_jets<Jet2>(p);
    std::vector<Jet2> g(nn);
    m.eval_into<Jet2>(x, g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Jet2& e = g[static_cast<std::size_t>(i * n + j)];
        out.g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e.value();
        for (int a = 0; a < n; ++a) {
          out.dg[static_cast<std::size_t>((a * n + i) * n + j)] = e.grad(a);
          for (int b = 0; b < n; ++b)
            out.d2g[static_cast<std::size_t>(((a * n + b) * n + i) * n + j)] = e.hess(a, b);
        }
      }
  } else {
    const auto x = seed_jets<Jet1>(p);
    std::vector<Jet1> g(nn);
    m.eval_into<Jet1>(x, g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Jet1& e = g[static_cast<std::size_t>(i * n + j)];
        out.g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e.value();
        for (int a = 0; a < n; ++a) out.dg[static_cast<std::size_t>((a * n + i) * n + j)] = e.grad(a);
      }
  }
  check_matrix(m, out.g);
  return out;
}

MetricJets metric_jets_fd(const MetricField& m, const Point& p, int order) {
  check_point(m, p);
  const int n = m.dim();
  const std::size_t nn = static_cast<std::size_t>(n * n);
  MetricJets out;
  out.n = n;
  out.g = raw_eval(m, p);
  check_matrix(m, out.g);
  out.dg.assign(nn * static_cast<std::size_t>(n), 0.0);
  if (order >= 2) out.d2g.assign(nn * nn, 0.0);

  auto at = [&](const Point& q) {
    if (!m.in_domain(q)) throw OutsideDomain("finite-difference stencil left the domain");
    return raw_eval(m, q);
  };
  // Largest admissible step not exceeding h0 (shrunk near the boundary, floor 1e-7).
  auto step_for = [&](const std::vector<int>& axes, double h0) {
    double h = h0;
    while (h >= 1e-7) {
      bool ok = true;
      for (int sa : {-1, 1})
        for (int sb : {-1, 1}) {
          Point q = p;
          for (std::size_t k = 0; k < axes.size(); ++k) q[static_cast<std::size_t>(axes[k])] += (k == 0 ? sa : sb) * h;
          ok = ok && m.in_domain(q);
        }
      if (ok) return h;
      h *= 0.1;
    }
    throw OutsideDomain("too close to the domain boundary for finite differences");
  };

  for (int a = 0; a < n; ++a) {
    const std::size_t ua = static_cast<std::size_t>(a);
    const double h = step_for({a}, std::max(1e-5, 1e-5 * std::abs(p[ua])));
    auto central = [&](double hh) {
      Point qp = p, qm = p;
      qp[ua] += hh;
      qm[ua] -= hh;
      Matrix d = at(qp) - at(qm);
      return d * (1.0 / (2.0 * hh));
    };
    const Matrix d = (4.0 * central(h / 2) - central(h)) * (1.0 / 3.0);
    for (std::size_t k = 0; k < nn; ++k) out.dg[ua * nn + k] = d.storage()[k];
  }
  if (order < 2) return out;

  // Second differences use a wider step; roundoff would dominate at 1e-5.
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const std::size_t ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
      const double scale = std::max({1.0, std::abs(p[ua]), std::abs(p[ub])});
      const double h = step_for(a == b ? std::vector<int>{a} : std::vector<int>{a, b}, 1e-3 * scale);
      auto second = [&](double hh) {
        if (a == b) {
          Point qp = p, qm = p;
          qp[ua] += hh;
          qm[ua] -= hh;
          return (at(qp) - 2.0 * out.g + at(qm)) * (1.0 / (hh * hh));
        }
        Point pp = p, pm = p, mp = p, mm = p;
        pp[ua] += hh, pp[ub] += hh;
        pm[ua] += hh, pm[ub] -= hh;
        mp[ua] -= hh, mp[ub] += hh;
        mm[ua] -= hh, mm[ub] -= hh;
        return (at(pp) - at(pm) - at(mp) + at(mm)) * (1.0 / (4.0 * hh * hh));
      };
      const Matrix d = (4.0 * second(h / 2) - second(h)) * (1.0 / 3.0);
      for (std::size_t k = 0; k < nn; ++k) {
        out.d2g[(ua * static_cast<std::size_t>(n) + ub) * nn + k] = d.storage()[k];
        out.d2g[(ub * static_cast<std::size_t>(n) + ua) * nn + k] = d.storage()[k];
      }
    }
  return out;
}

Signature signature_of(const Matrix& g, double rel_tol) {
  const SymEigen e = sym_eigen(g);
  double scale = 0.0;
  for (double v : e.values) scale = std::max(scale, std::abs(v));
  Signature s;
  for (double v : e.values) {
    if (std::abs(v) <= rel_tol * scale || scale == 0.0)
      throw DegenerateMetric("metric is near-degenerate; signature undefined");
    if (v < 0)
      ++s.neg;
    else
      ++s.pos;
  }
  return s;
}

FrameAtPoint orthonormal_frame(const MetricField& m, const Point& p, std::uint64_t seed) {
  return orthonormal_frame(metric_eval(m, p), p, seed);
}

FrameAtPoint orthonormal_frame(const Matrix& g, const Point& p, std::uint64_t seed) {
  const std::size_t n = g.rows();
  std::vector<Vector> cand;
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    cand.push_back(e);
  }
  Rng rng(seed);
  for (int k = 0; k < 20; ++k) {
    Vector v(n);
    for (double& x : v) x = rng.normal();
    cand.push_back(v);
  }
  FrameAtPoint f{p, {}, {}};
  while (f.basis.size() < n) {
    double best = 0.0;
    Vector best_v;
    for (const Vector& c : cand) {
      Vector v = c;
      for (std::size_t a = 0; a < f.basis.size(); ++a)
        v = v - (f.norms[a] * bilinear(g, f.basis[a], c)) * f.basis[a];
      const double nv = norm(v);
      if (nv < 1e-12) continue;
      v = (1.0 / nv) * v;
      const double q = std::abs(bilinear(g, v, v));
      if (q > best) {
        best = q;
        best_v = v;
      }
    }
    if (best <= 1e-8) throw DegenerateMetric("orthonormal frame: no admissible pivot");
    const double q = bilinear(g, best_v, best_v);
    f.basis.push_back((1.0 / std::sqrt(std::abs(q))) * best_v);
    f.norms.push_back(q > 0 ? 1 : -1);
  }
  return f;
}

VectorFieldExpr::VectorFieldExpr(std::vector<Expr> components, const std::vector<std::string>& coords)
    : exprs_(std::move(components)) {
  if (exprs_.size() != coords.size())
    throw DimensionError("vector field has " + std::to_string(exprs_.size()) + " components for a " +
                         std::to_string(coords.size()) + "-dimensional chart");
  for (const Expr& e : exprs_) comp_.emplace_back(e, coords);
}

VectorFieldExpr VectorFieldExpr::parse(const std::vector<std::string>& components,
                                       const std::vector<std::string>& coords) {
  std::vector<Expr> e;
  for (const auto& c : components) e.push_back(conehol::parse(c));
  return VectorFieldExpr(std::move(e), coords);
}

std::vector<std::string> unique_names(const std::vector<std::string>& taken, const std::vector<std::string>& wanted) {
  std::vector<std::string> used = taken;
  std::vector<std::string> out;
  for (const auto& w : wanted) {
    std::string name = w;
    for (int k = 2; std::find(used.begin(), used.end(), name) != used.end(); ++k) name = w + std::to_string(k);
    used.push_back(name);
    out.push_back(name);
  }
  return out;
}

}  // namespace conehol
