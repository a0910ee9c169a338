#pragma once

// Verifiers for para-Sasaki, para-Kaehler and para-3-Sasaki structures, the
// alpha-split of a decomposable cone, and isometries between charts.
//
// Each verifier evaluates pointwise residuals over a grid and reports the
// maximum of every named residual.

#include <string>
#include <vector>

#include "conehol/geometry.hpp"
#include "conehol/metric_zoo.hpp"
#include "conehol/tensor_ops.hpp"

namespace conehol {

struct ResidualItem {
  enum class Kind {
    Max,   // pass when value <= tol
    Min,   // pass when value >= tol
    Info,  // reported only
  };
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  Kind kind = Kind::Max;
  bool pass() const;
};

struct StructureReport {
  std::vector<ResidualItem> items;

  void add(std::string name, double value, double tol, ResidualItem::Kind kind = ResidualItem::Kind::Max);
  bool pass() const;
  /// Value of the named item; throws Error when absent.
  double operator[](const std::string& name) const;
  const ResidualItem* find(const std::string& name) const;
  std::vector<std::string> failures() const;
};

struct ParaSasakiCandidate {
  MetricField metric;
  VectorFieldExpr reeb;
  std::vector<Point> grid;
};

/// Checks on a (2n+1)-manifold of signature (n+1, n):
///   unit-timelike   |g(T,T) + 1|
///   geodesic        |nabla_T T|
///   killing         |L_T g|
///   phi-squared     |phi^2 - id - g(., T) T|,  phi = nabla T
///   nabla-phi       |(nabla_U phi) V + g(U,V) T - g(V,T) U|
/// Throws ConfigError on a signature mismatch.
StructureReport verify_para_sasaki(const ParaSasakiCandidate& c, double tol = 1e-7);

/// The (+1) and (-1) eigenspaces of phi on T^perp at p.
struct ContactSplit {
  std::vector<Vector> plus, minus;
};
ContactSplit contact_split(const MetricField& m, const VectorFieldExpr& t, const Point& p);

/// (d theta)_ab = d_a theta_b - d_b theta_a for theta = g(T, .).
Matrix contact_dtheta(const MetricField& m, const VectorFieldExpr& t, const Point& p);

/// Contact form theta = g(T, .): d theta(X+, X-) = 2 g(X+, X-), T in the
/// kernel of d theta, Levi form d theta(., phi .) = -2 g on T^perp, the metric
/// identity g = -theta^2 - 1/2 L_theta, and the volume theta ^ (d theta)^n
/// (item "contact-volume", the smallest |det| of the bordered matrix).
StructureReport contact_form_checks(const ParaSasakiCandidate& c, double tol = 1e-7);

/// T lifted to the cone dr^2 + r^2 g with zero radial component.
VectorFieldExpr lift_to_cone(const MetricField& cone, const MetricField& base, const VectorFieldExpr& t);

struct ConeStructure {
  MetricField cone;
  VectorFieldExpr reeb;  // lifted T
  EndoField J;           // nabla-hat of the lifted T
  std::vector<Point> grid;  // cone points (r, x)
  StructureReport report;
};

/// Lift a verified para-Sasaki structure to the para-Kaehler cone and check
/// J(d_r) = T/r, J(T) = r d_r, J on T^perp equals phi, J^2 = id,
/// g(J., J.) = -g, nabla J = 0 and isotropy of V+- = R(r d_r +- T) + E+-.
/// Throws VerificationError when the base structure fails its own checks.
ConeStructure sasaki_to_cone_J(const ParaSasakiCandidate& c, const std::vector<double>& radii = {0.6, 1.0, 1.7},
                               double tol = 1e-6);

/// J^2 = id, equal eigenspace dimensions, g(J., J.) = -g, nabla J = 0,
/// vanishing Nijenhuis tensor and d omega = 0 with omega = g(J., .).
StructureReport verify_para_kahler(const MetricField& m, const EndoField& J, const std::vector<Point>& grid,
                                   double tol = 1e-6);

/// Checks the curvature identity R(X,Y) = R1(JX, JY) - 2 omega(X,Y) J on T^perp,
/// where R1(X,Y) = X ^ Y has constant curvature 1. `omega_sign` selects
/// omega = omega_sign * g(J., .).
double para_sasaki_curvature_residual(const MetricField& m, const VectorFieldExpr& t, const Point& p,
                                      int omega_sign);

/// (nabla_{d_1} R)(T, Y1-, d_1, Y1-) for the explicit family with b = 0,
/// where Y_i- = H^ij (u_j T + d_{x_{j+n}}).
double para_sasaki_nabla_R_component(const ParaSasakiExample& ex, const Point& p);

struct AlphaSplitResult {
  std::vector<double> alpha;  // per grid point
  std::vector<Vector> X;      // X = X1 - alpha d_r
  StructureReport report;
};

/// Decompose d_r = X1 + X2 along the complementary distributions V1 + V2 of
/// a cone (coordinates (r, x)) and check the identities satisfied by
/// alpha = g(X1, X1) and X = X1 - alpha d_r. Throws DegenerateMetric when the
/// distributions are not complementary at a grid point.
AlphaSplitResult extract_alpha_split(const MetricField& cone, const std::vector<VectorFieldExpr>& v1,
                                     const std::vector<VectorFieldExpr>& v2, const std::vector<Point>& grid,
                                     double tol = 1e-7);

/// A smooth map given by component expressions in the source coordinates.
struct IsometrySpec {
  MetricField source, target;
  std::vector<Expr> map;
};

/// max |phi^* g_target - g_source| over the grid; throws OutsideDomain when
/// phi leaves the target domain.
double verify_isometry(const IsometrySpec& s, const std::vector<Point>& grid);

/// Para-3-Sasaki checks for T1, T2, T3 with g(Ti, Tj) = diag(-1, -1, 1):
/// orthonormality, Killing, nabla_{T2} T1 = T3, the bracket relations,
/// anticommuting phi1 phi2 on span{T}^perp and J3 = J1 J2 on the cone.
StructureReport verify_three_sasaki(const MetricField& m, const std::vector<VectorFieldExpr>& t,
                                    const std::vector<Point>& grid, const std::vector<double>& radii = {0.7, 1.4},
                                    double tol = 1e-7);

}  // namespace conehol
