#pragma once

// Parallel transport, holonomy algebra estimation and the classification of
// the holonomy representation.
//
// Loop orientation: a rectangle loop in the (i, j) coordinate plane runs
// p -> p + h e_i -> p + h e_i + h e_j -> p + h e_j -> p, so that
// (P - I) / h^2 -> -R(e_i, e_j) as h -> 0.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "conehol/geometry.hpp"
#include "conehol/tensor_ops.hpp"

namespace conehol {

/// A piecewise smooth curve on [t0, t1]; breaks (including both ends) split
/// it into smooth pieces that are integrated separately.
struct Curve {
  std::function<Point(double)> position;
  std::function<Vector(double)> velocity;
  std::vector<double> breaks;

  double t0() const { return breaks.front(); }
  double t1() const { return breaks.back(); }
  bool closed(double tol = 1e-12) const;
};

Curve segment_curve(const Point& a, const Point& b);
Curve polygon_curve(const std::vector<Point>& vertices);
Curve rectangle_loop(const Point& p, int i, int j, double h);
/// Coordinates given as expressions in `tvar`, smooth between breaks.
Curve expression_curve(const std::vector<std::string>& comps, const std::string& tvar, std::vector<double> breaks);

struct TransportOptions {
  int steps = 400;  // RK4 steps per smooth piece, doubled on drift
  double drift_tol = 1e-8;
  int max_doublings = 6;
};

struct TransportResult {
  Matrix map;       // columns: transported coordinate basis vectors
  int steps = 0;    // steps per piece that met the drift tolerance
  double drift = 0.0;
};

/// Transport of T_{c(t0)} to T_{c(t1)} along c.
TransportResult transport_matrix(const MetricField& m, const Curve& c, const TransportOptions& opt = {});
Vector parallel_transport(const MetricField& m, const Curve& c, const Vector& v0, const TransportOptions& opt = {});
/// Transport around a closed curve.
Matrix loop_holonomy(const MetricField& m, const Curve& loop, const TransportOptions& opt = {});

/// Generators of (an estimate of) the holonomy algebra at a point.
struct HolonomySpan {
  Point base;
  Matrix g;
  std::vector<Matrix> generators;   // orthonormal for the trace form <A, B> = tr(A^T B)
  std::vector<std::string> provenance;
  bool lower_bound = true;  // the estimate never over-counts

  int dim() const { return static_cast<int>(generators.size()); }
};

struct SpanOptions {
  int path_samples = 8;
  double radius = 0.5;
  std::uint64_t seed = 0;
  double rank_tol = 1e-6;    // relative singular-value threshold
  double abs_floor = 1e-10;  // generators below this norm are dropped
  TransportOptions transport;
};

/// tau^-1 R(tau X, tau Y) tau for radial transports tau to nearby points,
/// together with R(e_i, e_j) at p.
HolonomySpan ambrose_singer_span(const MetricField& m, const Point& p, const SpanOptions& opt = {});

/// Reduce a list of matrices to an orthonormal basis of their span.
std::vector<Matrix> span_basis(const std::vector<Matrix>& mats, double rel_tol, double abs_floor);

/// max_k |g A_k + A_k^T g| / |A_k|.
double skewness_residual(const HolonomySpan& s);

/// Close the span under commutators.
HolonomySpan lie_closure(const HolonomySpan& s, double tol = 1e-6);

struct SubspaceReport {
  Matrix basis;  // orthonormal columns
  int dim = 0;
  double invariance_residual = 0.0;
  int gram_rank = 0;
  bool isotropic = false;
  bool nondegenerate = false;
  std::string origin;
};

enum class HolonomyClass { Trivial, Irreducible, IndecomposableReducible, Decomposable };
std::string to_string(HolonomyClass c);

struct ScanResult {
  std::vector<SubspaceReport> subspaces;  // proper invariant subspaces found
  HolonomyClass label = HolonomyClass::Trivial;
  int witness = -1;  // index into subspaces, -1 if none
};

struct ScanOptions {
  int random_vectors = 32;
  std::uint64_t seed = 0;
  double rank_tol = 1e-6;
  double isotropy_tol = 1e-6;
  double invariance_tol = 1e-6;
};

ScanResult invariant_subspace_scan(const HolonomySpan& s, const ScanOptions& opt = {});

/// Subspace statistics for an arbitrary basis (columns need not be orthonormal).
SubspaceReport describe_subspace(const HolonomySpan& s, const std::vector<Vector>& vectors, double rank_tol = 1e-6,
                                 double isotropy_tol = 1e-6);

struct KernelVector {
  Vector v;
  double sigma = 0.0;   // singular value of the stacked generators
  double norm_sq = 0.0; // g(v, v) / |v|^2
  std::string causal;   // "timelike", "spacelike" or "lightlike"
};

struct AnnihilatedReport {
  std::vector<KernelVector> kernel;
  bool has_lightlike = false;
  Vector lightlike;  // a g-null vector in the kernel when one exists
};

AnnihilatedReport annihilated_vectors(const HolonomySpan& s, double rel_tol = 1e-6, double lightlike_tol = 1e-6);

/// max over the grid of the spectral norm of nabla X.
double verify_parallel_field(const MetricField& m, const VectorFieldExpr& x, const std::vector<Point>& grid);

/// max over grid points, coordinate directions and basis fields of the part of
/// nabla_{e_k} V lying outside the distribution.
double verify_parallel_distribution(const MetricField& m, const std::vector<VectorFieldExpr>& basis,
                                    const std::vector<Point>& grid);

}  // namespace conehol
