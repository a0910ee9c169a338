#pragma once

// Pointwise tensor calculus on a chart: connection, curvature and their
// covariant derivatives, plus closed-form oracles for warped products and
// cones.
//
// Conventions.
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
//   R(d_i, d_j) d_k = R^l_{kij} d_l,
//   R_ijkl = g(R(d_i, d_j) d_k, d_l),
//   X ^ Y = X (x) g(Y, .) - Y (x) g(X, .).
// With these the unit round sphere has R(X,Y) = +X ^ Y, i.e.
// R_ijkl = g_jk g_il - g_ik g_jl. Sign conventions for curvature vary between
// authors; this one makes the cone over a curvature-1/c base flat.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conehol/geometry.hpp"
#include "conehol/metric_zoo.hpp"

namespace conehol {

/// Gamma^k_ij at a point, stored densely as [k][i][j].
struct Christoffel {
  int n = 0;
  std::vector<double> gamma;

  double operator()(int k, int i, int j) const { return gamma[idx(k, i, j)]; }
  double& at(int k, int i, int j) { return gamma[idx(k, i, j)]; }
  /// Gamma(v, w)^k = Gamma^k_ij v^i w^j.
  Vector contract(const Vector& v, const Vector& w) const;
  /// Matrix A with (A)^k_j = Gamma^k_ij v^i.
  Matrix along(const Vector& v) const;

 private:
  std::size_t idx(int k, int i, int j) const { return static_cast<std::size_t>((k * n + i) * n + j); }
};

Christoffel christoffel(const MetricField& m, const Point& p);
Christoffel christoffel_from_jets(const MetricJets& j, const Matrix& ginv);

/// Metric, inverse, Gamma and d_m Gamma^k_ij at a point.
struct ConnectionJets {
  int n = 0;
  Matrix g, ginv;
  std::vector<double> dg;  // [m][i][j]
  Christoffel gamma;
  std::vector<double> dgamma;  // [m][k][i][j]
  double d(int m, int k, int i, int j) const { return dgamma[static_cast<std::size_t>(((m * n + k) * n + i) * n + j)]; }
};

ConnectionJets connection_jets(const MetricField& m, const Point& p);

struct Curvature {
  int n = 0;
  Matrix g;
  std::vector<double> up;    // [l][k][i][j] = R^l_{kij}
  std::vector<double> down;  // [i][j][k][l] = R_ijkl

  double R(int l, int k, int i, int j) const { return up[id4(l, k, i, j)]; }
  double lowered(int i, int j, int k, int l) const { return down[id4(i, j, k, l)]; }
  double lowered(const Vector& a, const Vector& b, const Vector& c, const Vector& d) const;
  /// R(d_i, d_j) as a matrix acting on column vectors.
  Matrix endomorphism(int i, int j) const;
  Matrix endomorphism(const Vector& x, const Vector& y) const;
  double max_abs() const;

  std::size_t id4(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * n + b) * n + c) * n + d);
  }
};

Curvature riemann(const MetricField& m, const Point& p);
Curvature curvature_from_connection(const ConnectionJets& c);
/// Assemble from endomorphisms E[i*n+j] = R(d_i, d_j).
Curvature curvature_from_endomorphisms(const Matrix& g, const std::vector<Matrix>& endo);

Matrix wedge(const Matrix& g, const Vector& x, const Vector& y);

/// Largest violation of the pair symmetries, relative to max |R|.
double curvature_symmetry_residual(const Curvature& r);
/// Largest violation of the first Bianchi identity, relative to max |R|.
double bianchi_residual(const Curvature& r);

/// max |R_ijkl - kappa (g_jk g_il - g_ik g_jl)|.
double constant_curvature_residual(const Curvature& r, double kappa);
double constant_curvature_residual(const MetricField& m, const Point& p, double kappa);

/// The kappa minimising the residual above, with the residual it attains.
struct CurvatureFit {
  double kappa = 0.0;
  double residual = 0.0;
};
CurvatureFit best_constant_curvature(const Curvature& r);

/// max |d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il|.
double metric_compatibility_residual(const MetricField& m, const Point& p);

// Closed forms for eps ds^2 + f1^2 g1 + f2^2 g2, coordinates (s, N1, N2).
Christoffel warped_connection_oracle(const WarpedSpec& spec, const Point& p);
Curvature warped_curvature_oracle(const WarpedSpec& spec, const Point& p);

/// Cone c dr^2 + r^2 g over `base` at p = (r, x):
/// R(d_r, .) = 0 and R(X,Y) = R_base(X,Y) - (1/c) X ^_g Y.
Curvature cone_curvature_oracle(const MetricField& base, double c, const Point& p);

struct NamedResidual {
  std::string name;
  double residual = 0.0;
};

/// Residuals of the warping-function system for constant curvature kappa
/// (c = -eps kappa), each gated on the factor dimensions. k1, k2 are the
/// factor curvatures, required when a factor has dimension > 1.
std::vector<NamedResidual> warped_cc_conditions(const WarpedSpec& spec, double kappa, const std::vector<double>& samples,
                                                std::optional<double> k1, std::optional<double> k2);

/// nabla_m R_ijkl stored as [m][i][j][k][l]. The partial derivatives of the
/// curvature come from central differences (step 1e-4, one Richardson pass).
struct NablaRiemann {
  int n = 0;
  std::vector<double> v;
  double operator()(int m, int i, int j, int k, int l) const {
    return v[static_cast<std::size_t>((((m * n + i) * n + j) * n + k) * n + l)];
  }
  double contract(const Vector& m, const Vector& a, const Vector& b, const Vector& c, const Vector& d) const;
  double max_abs() const;
};
NablaRiemann covariant_deriv_riemann(const MetricField& m, const Point& p, double h = 1e-4);

/// (L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k.
Matrix lie_derivative_metric(const MetricField& m, const VectorFieldExpr& x, const Point& p);

/// (nabla X)^i_j = d_j X^i + Gamma^i_jk X^k.
Matrix covariant_derivative_vector(const MetricField& m, const VectorFieldExpr& x, const Point& p);

/// Endomorphism field value with its first partial derivatives d[m] = d_m J.
struct EndoJet {
  Matrix value;
  std::vector<Matrix> d;
};
using EndoField = std::function<EndoJet(const Point&)>;

EndoField endo_field_from_expressions(const std::vector<std::vector<std::string>>& comps,
                                      const std::vector<std::string>& coords);
/// J = nabla X together with its partials, from second-order jets.
EndoJet covariant_derivative_jet(const MetricField& m, const VectorFieldExpr& x, const Point& p);
EndoField covariant_derivative_field(const MetricField& m, const VectorFieldExpr& x);

/// (nabla_m J) for every coordinate direction m.
std::vector<Matrix> covariant_derivative_endo(const MetricField& m, const EndoJet& j, const Point& p);

/// N(d_i, d_j)^a = (J([J d_i, d_j] + [d_i, J d_j]) - [J d_i, J d_j])^a, stored [a][i][j].
std::vector<double> nijenhuis(const EndoJet& j);

/// Vector field value and Jacobian dX[i][j] = d_j X^i.
struct VectorJet {
  Vector value;
  Matrix jac;
};
VectorJet vector_jet(const VectorFieldExpr& x, const Point& p);
/// [X, Y]^i = X^j d_j Y^i - Y^j d_j X^i.
Vector lie_bracket(const VectorJet& x, const VectorJet& y);

}  // namespace conehol
