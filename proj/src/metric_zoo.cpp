#include "conehol/metric_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conehol/errors.hpp"

namespace conehol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Signature add_sig(Signature a, Signature b) { return {a.neg + b.neg, a.pos + b.pos}; }

// Warping functions must not vanish or change sign on the interval.
void check_warping(const BoundExpr& f, double a, double b, const std::string& label) {
  const double lo = std::isfinite(a) ? a : std::min(-20.0, b - 1.0);
  const double hi = std::isfinite(b) ? b : std::max(20.0, a + 1.0);
  constexpr int kSamples = 512;
  double prev = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const double s = lo + (hi - lo) * (k + 0.5) / kSamples;
    double v;
    try {
      v = f.eval(std::span<const double>(&s, 1));
    } catch (const DomainError& e) {
      throw Error("warping function " + label + " is undefined on the interval: " + e.what());
    }
    if (v == 0.0 || !std::isfinite(v) || (k > 0 && (v > 0) != (prev > 0)))
      throw Error("warping function " + label + " vanishes on the interval");
    prev = v;
  }
}

template <class T>
void embed_block(std::span<T> out, std::size_t n, std::size_t off, const std::vector<T>& blk, std::size_t m,
                 const T& factor) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out[(off + i) * n + off + j] = factor * blk[i * m + j];
}

}  // namespace

MetricField make_doubly_warped(const WarpedSpec& spec) {
  if (spec.epsilon != 1 && spec.epsilon != -1) throw ConfigError("epsilon must be +1 or -1");
  if (!(spec.a < spec.b)) throw ConfigError("warped interval must satisfy a < b");
  const std::vector<std::string> svar{spec.coord};
  const BoundExpr f1(spec.f1, svar), f2(spec.f2, svar);
  const int n1 = spec.dim1(), n2 = spec.dim2();
  if (n1 > 0) check_warping(f1, spec.a, spec.b, "f1");
  if (n2 > 0) check_warping(f2, spec.a, spec.b, "f2");

  std::vector<std::string> coords{spec.coord};
  Signature sig = spec.epsilon > 0 ? Signature{0, 1} : Signature{1, 0};
  if (spec.g1) {
    const auto c = unique_names(coords, spec.g1->coords());
    coords.insert(coords.end(), c.begin(), c.end());
    sig = add_sig(sig, spec.g1->declared_signature());
  }
  if (spec.g2) {
    const auto c = unique_names(coords, spec.g2->coords());
    coords.insert(coords.end(), c.begin(), c.end());
    sig = add_sig(sig, spec.g2->declared_signature());
  }
  const std::size_t n = coords.size();
  const double a = spec.a, b = spec.b;
  const auto g1 = spec.g1, g2 = spec.g2;
  const double eps = spec.epsilon;

  auto domain = [a, b, g1, g2, n1, n2](std::span<const double> x) {
    if (!(x[0] > a && x[0] < b)) return false;
    if (g1 && !g1->in_domain(x.subspan(1, static_cast<std::size_t>(n1)))) return false;
    if (g2 && !g2->in_domain(x.subspan(1 + static_cast<std::size_t>(n1), static_cast<std::size_t>(n2)))) return false;
    return true;
  };
  auto gen = [=](auto x, auto out) {
    using T = typename decltype(out)::value_type;
    for (auto& o : out) o = T(0.0);
    out[0] = T(eps);
    const auto s = x.subspan(0, 1);
    if (g1) {
      const std::size_t m = static_cast<std::size_t>(n1);
      std::vector<T> blk(m * m);
      g1->eval_into<T>(x.subspan(1, m), blk);
      const T f = f1.eval(s);
      embed_block<T>(out, n, 1, blk, m, f * f);
    }
    if (g2) {
      const std::size_t m = static_cast<std::size_t>(n2);
      std::vector<T> blk(m * m);
      g2->eval_into<T>(x.subspan(1 + static_cast<std::size_t>(n1), m), blk);
      const T f = f2.eval(s);
      embed_block<T>(out, n, 1 + static_cast<std::size_t>(n1), blk, m, f * f);
    }
  };
  std::string name = "doubly-warped(" + std::string(spec.epsilon > 0 ? "+" : "-") + ", " + spec.f1.to_string();
  if (spec.g1) name += " * " + spec.g1->name();
  if (spec.g2) name += ", " + spec.f2.to_string() + " * " + spec.g2->name();
  name += ")";
  return MetricField::generic(name, coords, sig, domain, gen);
}

MetricField make_cone(const MetricField& base, double c) {
  if (c == 0.0 || !std::isfinite(c)) throw ConfigError("cone constant c must be non-zero");
  std::vector<std::string> coords{"r"};
  const auto bc = unique_names(coords, base.coords());
  coords.insert(coords.end(), bc.begin(), bc.end());
  const Signature sig = add_sig(c > 0 ? Signature{0, 1} : Signature{1, 0}, base.declared_signature());
  const std::size_t n = coords.size(), m = n - 1;
  auto domain = [base, m](std::span<const double> x) { return x[0] > 0.0 && base.in_domain(x.subspan(1, m)); };
  auto gen = [base, c, n, m](auto x, auto out) {
    using T = typename decltype(out)::value_type;
    for (auto& o : out) o = T(0.0);
    out[0] = T(c);
    std::vector<T> blk(m * m);
    base.eval_into<T>(x.subspan(1, m), blk);
    const T r2 = x[0] * x[0];
    embed_block<T>(out, n, 1, blk, m, r2);
  };
  Signature s = sig;
  MetricField cone = base.has_jets()
                         ? MetricField::generic("cone(" + base.name() + ")", coords, s, domain, gen)
                         : MetricField::from_values("cone(" + base.name() + ")", coords, s, domain,
                                                    [gen](std::span<const double> x, std::span<double> out) {
                                                      gen(x, out);
                                                    });
  // The cone over a space of constant curvature 1/c is flat.
  if (base.constant_curvature && std::abs(*base.constant_curvature - 1.0 / c) < 1e-15) cone.constant_curvature = 0.0;
  return cone;
}

MetricField scale_metric(const MetricField& g, double lambda) {
  if (lambda == 0.0) throw ConfigError("metric scale must be non-zero");
  const Signature s = g.declared_signature();
  const Signature sig = lambda > 0 ? s : Signature{s.pos, s.neg};
  const std::size_t n = static_cast<std::size_t>(g.dim());
  auto gen = [g, lambda, n](auto x, auto out) {
    using T = typename decltype(out)::value_type;
    g.eval_into<T>(x, out);
    for (std::size_t k = 0; k < n * n; ++k) out[k] = T(lambda) * out[k];
  };
  auto domain = [g](std::span<const double> x) { return g.in_domain(x); };
  std::string name = (lambda == -1.0 ? "-" : std::to_string(lambda) + "*") + g.name();
  MetricField out = g.has_jets() ? MetricField::generic(name, g.coords(), sig, domain, gen)
                                 : MetricField::from_values(name, g.coords(), sig, domain,
                                                            [gen](std::span<const double> x, std::span<double> o) {
                                                              gen(x, o);
                                                            });
  if (g.constant_curvature) out.constant_curvature = *g.constant_curvature / lambda;
  return out;
}

MetricField make_explicit(const std::string& name, const std::vector<std::string>& coords,
                          const std::vector<std::vector<std::string>>& components, Signature sig, const Box& box) {
  const std::size_t n = coords.size();
  if (components.size() != n) throw ConfigError("explicit metric: component matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  std::vector<std::vector<Expr>> e(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (components[i].size() != n) throw ConfigError("explicit metric: ragged component matrix");
    for (const auto& c : components[i]) e[i].push_back(parse(c));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (pretty_print(e[i][j]) != pretty_print(e[j][i]))
        throw ConfigError("explicit metric: components (" + std::to_string(i) + "," + std::to_string(j) +
                          ") and its transpose differ");
  Box bx = box;
  if (bx.lo.empty()) bx.lo.assign(n, -kInf);
  if (bx.hi.empty()) bx.hi.assign(n, kInf);
  if (bx.lo.size() != n || bx.hi.size() != n) throw ConfigError("explicit metric: domain box has wrong size");
  auto domain = [bx](std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] > bx.lo[i] && x[i] < bx.hi[i])) return false;
    return true;
  };
  return MetricField::from_expressions(name, coords, e, sig, domain);
}

MetricField line_metric(const std::string& coord, int sign) {
  const double s = sign >= 0 ? 1.0 : -1.0;
  auto gen = [s](auto, auto out) {
    using T = typename decltype(out)::value_type;
    out[0] = T(s);
  };
  MetricField m = MetricField::generic(std::string(s > 0 ? "" : "-") + "d" + coord + "^2", {coord},
                                       s > 0 ? Signature{0, 1} : Signature{1, 0}, nullptr, gen);
  m.constant_curvature = 0.0;
  return m;
}

MetricField model_plane(int k) {
  MetricField m;
  if (k > 0) {
    m = make_explicit("round-sphere", {"th", "ph"}, {{"1", "0"}, {"0", "sin(th)^2"}}, {0, 2},
                      Box{{0.0, -kInf}, {M_PI, kInf}});
  } else if (k < 0) {
    m = make_explicit("hyperbolic-plane", {"rho", "ph"}, {{"1", "0"}, {"0", "sinh(rho)^2"}}, {0, 2},
                      Box{{0.0, -kInf}, {kInf, kInf}});
  } else {
    m = make_explicit("euclidean-plane", {"x", "y"}, {{"1", "0"}, {"0", "1"}}, {0, 2}, Box{});
  }
  m.constant_curvature = static_cast<double>(k > 0 ? 1 : k < 0 ? -1 : 0);
  return m;
}

namespace {

enum class FactorKind { None, Line, CC };

struct EntryDef {
  CatalogEntryInfo info;
  const char* f1;
  const char* f2;
  double a, b;
  FactorKind k1;
  int kk1;  // factor curvature = kk1 * epsilon
  FactorKind k2;
  int kk2;
};

const std::vector<EntryDef>& entry_defs() {
  using F = FactorKind;
  static const std::vector<EntryDef> defs = {
      {{"cosh-sinh", "eps ds^2 + cosh^2 g'_{-eps} + sinh^2 g''_{eps}", -1}, "cosh(s)", "sinh(s)", 0, kInf, F::CC, -1, F::CC, 1},
      {{"cos-sin", "eps ds^2 + cos^2 g'_{eps} + sin^2 g''_{eps}", 1}, "cos(s)", "sin(s)", 0, M_PI / 2, F::CC, 1, F::CC, 1},
      {{"exp", "eps ds^2 + e^{2s} g'_0", -1}, "exp(s)", "1", -kInf, kInf, F::CC, 0, F::None, 0},
      {{"s2-flat", "eps ds^2 + s^2 g'_{eps} + g''_0", 0}, "s", "1", 0, kInf, F::CC, 1, F::CC, 0},
      {{"cosh-dt-sinh", "eps ds^2 + cosh^2 dt^2 + sinh^2 g''_{eps}", -1}, "cosh(s)", "sinh(s)", 0, kInf, F::Line, 0, F::CC, 1},
      {{"cosh-sinh-du", "eps ds^2 + cosh^2 g'_{-eps} + sinh^2 du^2", -1}, "cosh(s)", "sinh(s)", 0, kInf, F::CC, -1, F::Line, 0},
      {{"cos-dt-sin", "eps ds^2 + cos^2 dt^2 + sin^2 g''_{eps}", 1}, "cos(s)", "sin(s)", 0, M_PI / 2, F::Line, 0, F::CC, 1},
      {{"cos-sin-du", "eps ds^2 + cos^2 g'_{eps} + sin^2 du^2", 1}, "cos(s)", "sin(s)", 0, M_PI / 2, F::CC, 1, F::Line, 0},
      {{"s2-dt-flat", "eps ds^2 + s^2 dt^2 + g''_0", 0}, "s", "1", 0, kInf, F::Line, 0, F::CC, 0},
      {{"sinh", "eps ds^2 + sinh^2 g'_{eps}", -1}, "sinh(s)", "1", 0, kInf, F::CC, 1, F::None, 0},
      {{"cosh", "eps ds^2 + cosh^2 g'_{-eps}", -1}, "cosh(s)", "1", -kInf, kInf, F::CC, -1, F::None, 0},
      {{"sin", "eps ds^2 + sin^2 g'_{eps}", 1}, "sin(s)", "1", 0, M_PI, F::CC, 1, F::None, 0},
      {{"flat", "eps ds^2 + g'_0", 0}, "1", "1", -kInf, kInf, F::CC, 0, F::None, 0},
      {{"cosh-dt-sinh-du", "eps ds^2 +- cosh^2 dt^2 +- sinh^2 du^2", -1}, "cosh(s)", "sinh(s)", 0, kInf, F::Line, 0, F::Line, 0},
      {{"cos-dt-sin-du", "eps ds^2 +- cos^2 dt^2 +- sin^2 du^2", 1}, "cos(s)", "sin(s)", 0, M_PI / 2, F::Line, 0, F::Line, 0},
      {{"sinh-dt", "eps ds^2 +- sinh^2 dt^2", -1}, "sinh(s)", "1", 0, kInf, F::Line, 0, F::None, 0},
      {{"cosh-dt", "eps ds^2 +- cosh^2 dt^2", -1}, "cosh(s)", "1", -kInf, kInf, F::Line, 0, F::None, 0},
      {{"sin-dt", "eps ds^2 +- sin^2 dt^2", 1}, "sin(s)", "1", 0, M_PI, F::Line, 0, F::None, 0},
  };
  return defs;
}

std::optional<MetricField> resolve_factor(FactorKind kind, int k, const std::optional<MetricField>& given, int sign,
                                          const std::string& line_coord, const std::string& label) {
  if (kind == FactorKind::None) {
    if (given) throw ConfigError("catalog entry takes no " + label);
    return std::nullopt;
  }
  if (kind == FactorKind::Line) {
    if (!given) return line_metric(line_coord, sign);
    if (given->dim() != 1) throw ConfigError(label + " must be one-dimensional for this entry");
    return given;
  }
  if (!given) return model_plane(k);
  if (given->dim() >= 2) {
    if (!given->constant_curvature)
      throw ConfigError(label + " must carry constant-curvature metadata (" + std::to_string(k) + ")");
    if (std::abs(*given->constant_curvature - k) > 1e-12)
      throw ConfigError(label + " has curvature " + std::to_string(*given->constant_curvature) + ", entry needs " +
                        std::to_string(k));
  }
  return given;
}

}  // namespace

const std::vector<CatalogEntryInfo>& catalog_entries() {
  static const std::vector<CatalogEntryInfo> infos = [] {
    std::vector<CatalogEntryInfo> v;
    for (const auto& d : entry_defs()) v.push_back(d.info);
    return v;
  }();
  return infos;
}

WarpedMetric make_cc_catalog_entry(const std::string& id, int epsilon, const CatalogOptions& opts) {
  if (id == "sphere2") return make_cc_catalog_entry("sin-dt", 1);
  if (id == "hyperbolic2") return make_cc_catalog_entry("sinh-dt", 1);
  if (id == "flat2") return make_cc_catalog_entry("flat", 1, CatalogOptions{line_metric("t"), {}, 1, 1});
  if (id == "desitter2") return make_cc_catalog_entry("cosh-dt", -1);
  if (id == "sphere3") {
    CatalogOptions o;
    o.g1 = make_cc_catalog_entry("sphere2", 1).metric;
    return make_cc_catalog_entry("sin", 1, o);
  }
  if (id == "hyperbolic3") {
    CatalogOptions o;
    o.g1 = make_cc_catalog_entry("sphere2", 1).metric;
    return make_cc_catalog_entry("sinh", 1, o);
  }
  if (epsilon != 1 && epsilon != -1) throw ConfigError("epsilon must be +1 or -1");
  const auto& defs = entry_defs();
  const auto it = std::find_if(defs.begin(), defs.end(), [&](const EntryDef& d) { return d.info.id == id; });
  if (it == defs.end()) throw ConfigError("unknown catalog entry '" + id + "'");
  WarpedSpec spec;
  spec.epsilon = epsilon;
  spec.f1 = parse(it->f1);
  spec.f2 = parse(it->f2);
  spec.a = it->a;
  spec.b = it->b;
  spec.g1 = resolve_factor(it->k1, it->kk1 * epsilon, opts.g1, opts.sign1, "t", "factor1");
  spec.g2 = resolve_factor(it->k2, it->kk2 * epsilon, opts.g2, opts.sign2, "u", "factor2");
  WarpedMetric out{make_doubly_warped(spec), spec, it->info.k_factor * epsilon};
  out.metric.set_name(id + (epsilon > 0 ? "(+)" : "(-)"));
  out.metric.constant_curvature = *out.k;
  return out;
}

WarpedMetric make_horospherical(int epsilon, const MetricField& g0) {
  CatalogOptions o;
  o.g1 = g0;
  if (g0.dim() == 1) {
    MetricField flat = g0;
    flat.constant_curvature = 0.0;
    o.g1 = flat;
  }
  WarpedMetric w = make_cc_catalog_entry("exp", epsilon, o);
  w.metric.set_name("horospherical(" + g0.name() + ")");
  return w;
}

WarpedMetric make_example_cosh(const MetricField& gF) {
  WarpedSpec spec;
  spec.epsilon = -1;
  spec.f1 = parse("cosh(s)");
  spec.a = -kInf;
  spec.b = kInf;
  spec.g1 = gF;
  WarpedMetric out{make_doubly_warped(spec), spec, std::nullopt};
  out.metric.set_name("cosh-example(" + gF.name() + ")");
  if (gF.constant_curvature && *gF.constant_curvature == 1.0) {
    out.k = 1.0;
    out.metric.constant_curvature = 1.0;
  }
  return out;
}

WarpedMetric make_horosphere_base(const MetricField& gN) {
  WarpedSpec spec;
  spec.epsilon = -1;
  spec.coord = "t";
  spec.f1 = parse("exp(-t)");
  spec.a = -kInf;
  spec.b = kInf;
  spec.g1 = scale_metric(gN, -1.0);
  WarpedMetric out{make_doubly_warped(spec), spec, std::nullopt};
  out.metric.set_name("horosphere-base(" + gN.name() + ")");
  if (gN.dim() <= 1 || (gN.constant_curvature && *gN.constant_curvature == 0.0)) {
    out.k = 1.0;
    out.metric.constant_curvature = 1.0;
  }
  return out;
}

ParaSasakiExample make_para_sasaki_example(const std::vector<std::string>& u_text) {
  const std::size_t n = u_text.size();
  if (n == 0 || 2 * n + 1 > static_cast<std::size_t>(kMaxDim))
    throw ConfigError("para-Sasaki example needs 1 <= n <= " + std::to_string((kMaxDim - 1) / 2));
  std::vector<std::string> coords{"t"};
  for (std::size_t i = 1; i <= 2 * n; ++i) coords.push_back("x" + std::to_string(i));
  std::vector<Expr> u;
  for (const auto& s : u_text) {
    Expr e = parse(s);
    for (const auto& v : e.variables()) {
      const auto it = std::find(coords.begin() + 1, coords.begin() + 1 + static_cast<long>(n), v);
      if (it == coords.begin() + 1 + static_cast<long>(n))
        throw ConfigError("u may depend on x1..x" + std::to_string(n) + " only, found '" + v + "'");
    }
    u.push_back(e);
  }
  const std::size_t dim = 2 * n + 1;
  std::vector<std::vector<Expr>> g(dim, std::vector<Expr>(dim, Expr::constant(0.0)));
  g[0][0] = Expr::constant(-1.0);
  for (std::size_t i = 0; i < n; ++i) {
    g[0][1 + n + i] = g[1 + n + i][0] = u[i];
    for (std::size_t j = 0; j < n; ++j) {
      // H_ij = 1/2 d_j u_i pairs x_{n+i} with x_j.
      const Expr h = parse("0.5*(" + pretty_print(differentiate(u[i], coords[1 + j])) + ")");
      g[1 + n + i][1 + j] = g[1 + j][1 + n + i] = h;
      g[1 + n + i][1 + n + j] = parse("-(" + pretty_print(u[i]) + ")*(" + pretty_print(u[j]) + ")");
    }
  }
  MetricField m = MetricField::from_expressions("para-sasaki-example", coords, g,
                                                Signature{static_cast<int>(n) + 1, static_cast<int>(n)}, nullptr);
  std::vector<std::string> reeb(dim, "0");
  reeb[0] = "1";
  return {m, VectorFieldExpr::parse(reeb, coords), u, static_cast<int>(n)};
}

MetricField make_pp_wave_cone_chart(const MetricField& gN) {
  std::vector<std::string> coords{"x", "y"};
  const auto fc = unique_names(coords, gN.coords());
  coords.insert(coords.end(), fc.begin(), fc.end());
  const std::size_t n = coords.size(), m = n - 2;
  const Signature sig = add_sig({1, 1}, gN.declared_signature());
  auto domain = [gN, m](std::span<const double> x) { return x[1] > 0.0 && gN.in_domain(x.subspan(2, m)); };
  auto gen = [gN, n, m](auto x, auto out) {
    using T = typename decltype(out)::value_type;
    for (auto& o : out) o = T(0.0);
    out[1] = T(1.0);
    out[n] = T(1.0);
    std::vector<T> blk(m * m);
    gN.eval_into<T>(x.subspan(2, m), blk);
    embed_block<T>(out, n, 2, blk, m, x[1] * x[1]);
  };
  return MetricField::generic("pp-wave-chart(" + gN.name() + ")", coords, sig, domain, gen);
}

WarpedMetric make_double_polar(DoublePolar variant, int epsilon, const std::optional<MetricField>& g1,
                               const std::optional<MetricField>& g2) {
  if (epsilon != 1 && epsilon != -1) throw ConfigError("epsilon must be +1 or -1");
  WarpedSpec spec;
  const bool trig = variant == DoublePolar::Trig;
  spec.epsilon = trig ? epsilon : -epsilon;
  spec.f1 = parse(trig ? "cos(s)" : "cosh(s)");
  spec.f2 = parse(trig ? "sin(s)" : "sinh(s)");
  spec.a = 0.0;
  spec.b = trig ? M_PI / 2 : kInf;
  const int k1 = epsilon, k2 = trig ? epsilon : -epsilon;
  auto check = [](const std::optional<MetricField>& g, int k, const char* label) {
    if (g && g->dim() >= 2 && (!g->constant_curvature || std::abs(*g->constant_curvature - k) > 1e-12))
      throw ConfigError(std::string(label) + " must be a pseudo-sphere of curvature " + std::to_string(k));
  };
  check(g1, k1, "factor1");
  check(g2, k2, "factor2");
  spec.g1 = g1;
  spec.g2 = g2;
  WarpedMetric out{make_doubly_warped(spec), spec, static_cast<double>(epsilon)};
  out.metric.set_name(std::string("double-polar-") + (trig ? "trig" : "hyperbolic"));
  out.metric.constant_curvature = *out.k;
  return out;
}

const std::vector<std::string>& family_ids() {
  static const std::vector<std::string> ids{"cone",          "doubly-warped",   "cc-catalog",
                                            "horospherical", "cosh-example",    "horosphere-base",
                                            "para-sasaki-example", "pp-wave-chart", "double-polar",
                                            "explicit"};
  return ids;
}

}  // namespace conehol
