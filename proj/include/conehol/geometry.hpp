#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conehol/expr.hpp"
#include "conehol/jet.hpp"
#include "conehol/linalg.hpp"

namespace conehol {

using Point = Vector;

/// Numbers of negative and positive eigenvalues.
struct Signature {
  int neg = 0;
  int pos = 0;
  int dim() const { return neg + pos; }
  bool operator==(const Signature&) const = default;
};

using DomainPredicate = std::function<bool(std::span<const double>)>;

/// A pseudo-Riemannian metric on an open subset of R^n given in a chart.
///
/// Evaluators fill a row-major n x n buffer. Jet evaluators may be absent, in
/// which case derivatives are taken by finite differences.
class MetricField {
 public:
  template <class T>
  using Evaluator = std::function<void(std::span<const T>, std::span<T>)>;

  struct Evaluators {
    Evaluator<double> value;
    Evaluator<Jet1> jet1;
    Evaluator<Jet2> jet2;
  };

  MetricField() = default;
  MetricField(std::string name, std::vector<std::string> coords, Signature sig, DomainPredicate domain,
              Evaluators ev);

  /// Build from a generic callable usable with double, Jet1 and Jet2.
  template <class Gen>
  static MetricField generic(std::string name, std::vector<std::string> coords, Signature sig,
                             DomainPredicate domain, Gen gen) {
    Evaluators ev;
    ev.value = [gen](std::span<const double> x, std::span<double> out) { gen(x, out); };
    ev.jet1 = [gen](std::span<const Jet1> x, std::span<Jet1> out) { gen(x, out); };
    ev.jet2 = [gen](std::span<const Jet2> x, std::span<Jet2> out) { gen(x, out); };
    return MetricField(std::move(name), std::move(coords), sig, std::move(domain), std::move(ev));
  }

  /// Components g_ij given as expressions in the coordinate names.
  static MetricField from_expressions(std::string name, std::vector<std::string> coords,
                                      const std::vector<std::vector<Expr>>& components, Signature sig,
                                      DomainPredicate domain);

  /// Value-only metric; derivatives are taken by finite differences.
  static MetricField from_values(std::string name, std::vector<std::string> coords, Signature sig,
                                 DomainPredicate domain, Evaluator<double> value);

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& coords() const { return coords_; }
  Signature declared_signature() const { return sig_; }
  bool has_jets() const { return static_cast<bool>(ev_.jet2); }
  bool in_domain(std::span<const double> x) const;

  template <class T>
  void eval_into(std::span<const T> x, std::span<T> out) const;

  void set_name(std::string n) { name_ = std::move(n); }
  void set_coords(std::vector<std::string> c);

  /// Sectional curvature if the metric is known to have constant curvature.
  std::optional<double> constant_curvature;
  double degeneracy_tol = 1e-10;

 private:
  std::string name_;
  std::vector<std::string> coords_;
  Signature sig_;
  DomainPredicate domain_;
  Evaluators ev_;
};

template <>
inline void MetricField::eval_into<double>(std::span<const double> x, std::span<double> out) const {
  ev_.value(x, out);
}
template <>
inline void MetricField::eval_into<Jet1>(std::span<const Jet1> x, std::span<Jet1> out) const {
  if (!ev_.jet1) throw Error("metric '" + name_ + "' has no jet evaluator");
  ev_.jet1(x, out);
}
template <>
inline void MetricField::eval_into<Jet2>(std::span<const Jet2> x, std::span<Jet2> out) const {
  if (!ev_.jet2) throw Error("metric '" + name_ + "' has no jet evaluator");
  ev_.jet2(x, out);
}

/// g at p; throws OutsideDomain or DegenerateMetric.
Matrix metric_eval(const MetricField& m, const Point& p);

/// g, dg and (order 2) d2g at p.
struct MetricJets {
  int n = 0;
  Matrix g;
  std::vector<double> dg;   // [m][i][j] = d_m g_ij
  std::vector<double> d2g;  // [a][b][i][j] = d_a d_b g_ij
  double d(int m, int i, int j) const { return dg[static_cast<std::size_t>((m * n + i) * n + j)]; }
  double dd(int a, int b, int i, int j) const {
    return d2g[static_cast<std::size_t>(((a * n + b) * n + i) * n + j)];
  }
};

MetricJets metric_jets(const MetricField& m, const Point& p, int order = 2);

/// Same, forced through finite differences even when jets are available.
MetricJets metric_jets_fd(const MetricField& m, const Point& p, int order = 2);

Signature signature_of(const Matrix& g, double rel_tol = 1e-12);

struct FrameAtPoint {
  Point point;
  std::vector<Vector> basis;  // columns e_a
  std::vector<int> norms;     // g(e_a, e_a) = +-1
};

/// g-orthonormal frame by Gram-Schmidt with pivoting.
FrameAtPoint orthonormal_frame(const MetricField& m, const Point& p, std::uint64_t seed = 0);
FrameAtPoint orthonormal_frame(const Matrix& g, const Point& p, std::uint64_t seed = 0);

/// Components of a vector field as expressions in the chart coordinates.
class VectorFieldExpr {
 public:
  VectorFieldExpr() = default;
  VectorFieldExpr(std::vector<Expr> components, const std::vector<std::string>& coords);
  static VectorFieldExpr parse(const std::vector<std::string>& components, const std::vector<std::string>& coords);

  int dim() const { return static_cast<int>(comp_.size()); }
  const std::vector<Expr>& components() const { return exprs_; }

  template <class T>
  std::vector<T> eval(std::span<const T> x) const {
    std::vector<T> out;
    out.reserve(comp_.size());
    for (const auto& c : comp_) out.push_back(c.eval(x));
    return out;
  }
  Vector at(const Point& p) const { return eval<double>(p); }

 private:
  std::vector<Expr> exprs_;
  std::vector<BoundExpr> comp_;
};

/// Jets seeded as the coordinate functions of the chart.
template <class J>
std::vector<J> seed_jets(const Point& p) {
  const int n = static_cast<int>(p.size());
  std::vector<J> x;
  x.reserve(p.size());
  for (int i = 0; i < n; ++i) x.push_back(J::variable(p[static_cast<std::size_t>(i)], n, i));
  return x;
}

/// Rename coordinates that clash with `taken` by appending digits.
std::vector<std::string> unique_names(const std::vector<std::string>& taken, const std::vector<std::string>& wanted);

}  // namespace conehol
