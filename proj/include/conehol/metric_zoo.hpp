#pragma once

// Constructors for the metric families studied by the toolkit.

#include <optional>
#include <string>
#include <vector>

#include "conehol/geometry.hpp"

namespace conehol {

/// Doubly warped product eps*ds^2 + f1(s)^2 g1 + f2(s)^2 g2 on (a, b) x N1 x N2.
/// An absent factor is zero-dimensional.
struct WarpedSpec {
  int epsilon = 1;
  Expr f1 = Expr::constant(1.0);
  Expr f2 = Expr::constant(1.0);
  double a = 0.0;
  double b = 1.0;
  std::optional<MetricField> g1;
  std::optional<MetricField> g2;
  std::string coord = "s";

  int dim1() const { return g1 ? g1->dim() : 0; }
  int dim2() const { return g2 ? g2->dim() : 0; }
};

MetricField make_doubly_warped(const WarpedSpec& spec);

/// c*dr^2 + r^2 g_base on (0, inf) x M.
MetricField make_cone(const MetricField& base, double c = 1.0);

/// lambda * g.
MetricField scale_metric(const MetricField& g, double lambda);

/// Metric given by explicit component expressions on an open coordinate box.
struct Box {
  std::vector<double> lo, hi;  // may hold +-inf
};
MetricField make_explicit(const std::string& name, const std::vector<std::string>& coords,
                          const std::vector<std::vector<std::string>>& components, Signature sig, const Box& box);

/// Constant-curvature catalog.
struct CatalogEntryInfo {
  std::string id;
  std::string formula;
  int k_factor;  // expected curvature k = k_factor * epsilon
};
const std::vector<CatalogEntryInfo>& catalog_entries();

/// A warped metric together with the data it was built from.
struct WarpedMetric {
  MetricField metric;
  WarpedSpec spec;
  std::optional<double> k;  // constant curvature when known
};

struct CatalogOptions {
  std::optional<MetricField> g1;  // defaults chosen per entry
  std::optional<MetricField> g2;
  int sign1 = 1;  // sign of the one-dimensional dt^2 factor
  int sign2 = 1;
};

/// Catalog entry by id, or a named model space ("sphere2", "sphere3",
/// "hyperbolic2", "hyperbolic3", "flat2", "desitter2").
WarpedMetric make_cc_catalog_entry(const std::string& id, int epsilon, const CatalogOptions& opts = {});

/// One-dimensional sign*dt^2 on the real line.
MetricField line_metric(const std::string& coord, int sign = 1);

/// Two-dimensional positive-definite model of curvature k in {-1, 0, 1}.
MetricField model_plane(int k);

/// eps*ds^2 + e^{2s} g0 with g0 flat.
WarpedMetric make_horospherical(int epsilon, const MetricField& g0);

/// -ds^2 + cosh(s)^2 gF.
WarpedMetric make_example_cosh(const MetricField& gF);

/// -(dt^2 + e^{-2t} gN).
WarpedMetric make_horosphere_base(const MetricField& gN);

struct ParaSasakiExample {
  MetricField metric;
  VectorFieldExpr reeb;  // T = d/dt
  std::vector<Expr> u;
  int n = 0;
};

/// Metric [[-1, 0, u^T], [0, 0, H^T], [u, H, G]] in coordinates (t, x1..x2n),
/// H_ij = 1/2 d_j u_i, G_ij = -u_i u_j, with u depending on x1..xn.
ParaSasakiExample make_para_sasaki_example(const std::vector<std::string>& u);

/// 2 dx dy + y^2 gN on y > 0.
MetricField make_pp_wave_cone_chart(const MetricField& gN);

enum class DoublePolar { Trig, Hyperbolic };
/// Trig: eps ds^2 + cos^2 g1 + sin^2 g2 on (0, pi/2);
/// Hyperbolic: -eps ds^2 + cosh^2 g1 + sinh^2 g2 on (0, inf).
WarpedMetric make_double_polar(DoublePolar variant, int epsilon, const std::optional<MetricField>& g1,
                                const std::optional<MetricField>& g2);

const std::vector<std::string>& family_ids();

}  // namespace conehol
