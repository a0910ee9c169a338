#include "conehol/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "conehol/errors.hpp"
#include "conehol/parallel.hpp"
#include "conehol/tensor_ops.hpp"

namespace conehol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double energy_of(const MetricField& m, const Point& x, const Vector& v) { return bilinear(metric_eval(m, x), v, v); }

// Size of the rounding error in g(v, v): sum of |g_ij v^i v^j|.
double energy_magnitude(const MetricField& m, const Point& x, const Vector& v) {
  const Matrix g = metric_eval(m, x);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) s += std::abs(g(i, j) * v[i] * v[j]);
  return s;
}

bool finite_and_bounded(const Vector& a, double bound) {
  for (double x : a)
    if (!std::isfinite(x) || std::abs(x) > bound) return false;
  return true;
}

enum class StepStatus { Ok, Outside };

// One RK4 step of (x, v)' = (v, -Gamma(v, v)).
StepStatus rk4_step(const MetricField& m, double h, Point& x, Vector& v) {
  auto accel = [&](const Point& p, const Vector& w, Vector& out) {
    if (!m.in_domain(p)) return false;
    try {
      out = -1.0 * christoffel(m, p).contract(w, w);
    } catch (const Error&) {
      return false;
    }
    return true;
  };
  Vector a1, a2, a3, a4;
  if (!accel(x, v, a1)) return StepStatus::Outside;
  const Point x2 = x + (0.5 * h) * v;
  const Vector v2 = v + (0.5 * h) * a1;
  if (!accel(x2, v2, a2)) return StepStatus::Outside;
  const Point x3 = x + (0.5 * h) * v2;
  const Vector v3 = v + (0.5 * h) * a2;
  if (!accel(x3, v3, a3)) return StepStatus::Outside;
  const Point x4 = x + h * v3;
  const Vector v4 = v + h * a3;
  if (!accel(x4, v4, a4)) return StepStatus::Outside;
  Point xn = x + (h / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4);
  if (!m.in_domain(xn)) return StepStatus::Outside;
  v = v + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  x = std::move(xn);
  return StepStatus::Ok;
}

}  // namespace

GeodesicState GeodesicState::at(const MetricField& m, Point x, Vector v) {
  if (!m.in_domain(x)) throw OutsideDomain("geodesic start is outside the domain of '" + m.name() + "'");
  const double e = energy_of(m, x, v);
  return {std::move(x), std::move(v), e};
}

std::string to_string(GeodesicEvent e) {
  switch (e) {
    case GeodesicEvent::Survived: return "survived";
    case GeodesicEvent::EscapedDomain: return "escaped-domain";
    case GeodesicEvent::BlewUp: return "blew-up";
  }
  return "unknown";
}

std::string to_string(CausalCase c) {
  switch (c) {
    case CausalCase::Lightlike: return "lightlike";
    case CausalCase::Spacelike: return "spacelike";
    case CausalCase::Timelike: return "timelike";
  }
  return "unknown";
}

GeodesicResult integrate_geodesic(const MetricField& m, const GeodesicState& s0, double t_max, int steps,
                                  const GeodesicOptions& opt) {
  if (!m.in_domain(s0.x)) throw OutsideDomain("geodesic start is outside the domain of '" + m.name() + "'");
  if (steps <= 0 || !(t_max > 0.0)) throw ConfigError("geodesic integration needs t_max > 0 and steps > 0");
  GeodesicResult res;
  Point x = s0.x;
  Vector v = s0.v;
  const double e0 = energy_of(m, x, v);
  const double scale = std::max(1.0, std::abs(e0));
  double e = e0;
  const double h_nom = t_max / steps;
  res.samples.push_back({0.0, x, v, e0});

  double t = 0.0, h_try = h_nom;
  bool near_boundary = false;
  int k = 1;
  while (k <= steps) {
    const double t_next = t_max * k / steps;
    // Land exactly on the sample grid instead of leaving a rounding-sized gap.
    const double gap = t_next - t;
    const double h = h_try >= gap * (1.0 - 1e-9) ? gap : h_try;
    Point xn = x;
    Vector vn = v;
    const StepStatus st = rk4_step(m, h, xn, vn);
    if (st == StepStatus::Outside) {
      if (h <= opt.boundary_tol) {
        res.event = GeodesicEvent::EscapedDomain;
        break;
      }
      near_boundary = true;
      h_try = h / 2;
      continue;
    }
    const double en = energy_of(m, xn, vn);
    const double budget = std::max(opt.drift_tol * h * scale, 1e-13 * energy_magnitude(m, xn, vn));
    if (!std::isfinite(en) || std::abs(en - e) > budget) {
      if (h / 2 < opt.min_step * std::max(1.0, std::abs(t))) {
        res.event = GeodesicEvent::BlewUp;
        break;
      }
      h_try = h / 2;
      continue;
    }
    x = std::move(xn);
    v = std::move(vn);
    e = en;
    t = (h == gap) ? t_next : t + h;
    ++res.steps_taken;
    res.energy_drift = std::max(res.energy_drift, std::abs(e - e0) / scale);
    if (!finite_and_bounded(x, opt.blowup) || !finite_and_bounded(v, opt.blowup)) {
      res.event = GeodesicEvent::BlewUp;
      break;
    }
    if (t == t_next) {
      res.samples.push_back({t, x, v, e});
      ++k;
    }
    if (!near_boundary) h_try = std::min(h_nom, 2 * h_try);
  }
  res.t_end = t;
  if (res.event != GeodesicEvent::Survived && res.samples.back().t != t) res.samples.push_back({t, x, v, e});
  return res;
}

void write_trajectory_csv(std::ostream& os, const GeodesicResult& r, const std::vector<std::string>& coords) {
  os << "t";
  for (const auto& c : coords) os << ',' << c;
  for (const auto& c : coords) os << ",d" << c;
  os << ",energy\n";
  char buf[32];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
  };
  for (const auto& s : r.samples) {
    put(s.t);
    for (double x : s.x) os << ',', put(x);
    for (double x : s.v) os << ',', put(x);
    os << ',';
    put(s.energy);
    os << '\n';
  }
}

ConeGeodesicClosedForm ConeGeodesicClosedForm::make(double r, double rho, double L, CausalCase kind) {
  if (!(r > 0.0)) throw DomainError("cone geodesic needs r > 0");
  if (kind != CausalCase::Lightlike && !(L > 0.0)) throw DomainError("non-null cone geodesic needs L > 0");
  ConeGeodesicClosedForm p{r, rho, L, kind, kInf};
  if (kind == CausalCase::Timelike) {
    if (rho < L * r) p.T = r / (L * r - rho);
  } else if (rho < 0.0) {
    p.T = -r / rho;
  }
  return p;
}

ConeGeodesicValue cone_geodesic_closed_form(const ConeGeodesicClosedForm& p, double t) {
  if (!(t >= 0.0 && t < p.T)) throw DomainError("parameter outside [0, T) of the cone geodesic");
  const double lin = p.rho * t + p.r;
  switch (p.kind) {
    case CausalCase::Lightlike: return {lin, p.r * t / lin};
    case CausalCase::Spacelike: {
      const double q = p.L * p.r * t;
      return {std::sqrt(lin * lin + q * q), std::atan(q / lin) / p.L};
    }
    case CausalCase::Timelike: {
      const double q = p.L * p.r * t;
      return {std::sqrt(lin * lin - q * q), std::atanh(q / lin) / p.L};
    }
  }
  return {};
}

namespace {

struct Warp {
  double f, df;
};

Warp warp_at(const Expr& f, const std::string& var, double s) {
  const Jet2 v = eval_jet2(f, {{var, Jet2::variable(s, 1, 0)}});
  if (v.value() == 0.0) throw DomainError("warping function vanishes at s = " + std::to_string(s));
  return {v.value(), v.grad(0)};
}

}  // namespace

WarpedAcceleration warped_geodesic_rhs(const WarpedSpec& spec, int eps1, int eps2, const WarpedGeodesicState& st) {
  const Warp w1 = warp_at(spec.f1, spec.coord, st.s);
  const Warp w2 = warp_at(spec.f2, spec.coord, st.s);
  const double eps = spec.epsilon;
  WarpedAcceleration a;
  a.s = eps * eps1 * w1.df * w1.f * st.du1 * st.du1 + eps * eps2 * w2.df * w2.f * st.du2 * st.du2;
  a.u1 = -2.0 * (w1.df / w1.f) * st.ds * st.du1;
  a.u2 = -2.0 * (w2.df / w2.f) * st.ds * st.du2;
  return a;
}

std::vector<WarpedGeodesicState> integrate_warped_geodesic(const WarpedSpec& spec, int eps1, int eps2,
                                                           const WarpedGeodesicState& st, double t_max, int steps) {
  using S = WarpedGeodesicState;
  auto f = [&](const S& y) {
    const WarpedAcceleration a = warped_geodesic_rhs(spec, eps1, eps2, y);
    return S{y.ds, y.du1, y.du2, a.s, a.u1, a.u2};
  };
  auto axpy = [](const S& y, double h, const S& d) {
    return S{y.s + h * d.s, y.u1 + h * d.u1, y.u2 + h * d.u2, y.ds + h * d.ds, y.du1 + h * d.du1, y.du2 + h * d.du2};
  };
  std::vector<S> out{st};
  const double h = t_max / steps;
  S y = st;
  for (int k = 0; k < steps; ++k) {
    const S k1 = f(y), k2 = f(axpy(y, h / 2, k1)), k3 = f(axpy(y, h / 2, k2)), k4 = f(axpy(y, h, k3));
    y = axpy(y, h / 6, S{k1.s + 2 * k2.s + 2 * k3.s + k4.s, k1.u1 + 2 * k2.u1 + 2 * k3.u1 + k4.u1,
                         k1.u2 + 2 * k2.u2 + 2 * k3.u2 + k4.u2, k1.ds + 2 * k2.ds + 2 * k3.ds + k4.ds,
                         k1.du1 + 2 * k2.du1 + 2 * k3.du1 + k4.du1, k1.du2 + 2 * k2.du2 + 2 * k3.du2 + k4.du2});
    out.push_back(y);
  }
  return out;
}

int CompletenessProbeReport::escapes() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(),
                                        [](const ProbeRecord& r) { return r.event != GeodesicEvent::Survived; }));
}

int CompletenessProbeReport::survivors() const { return static_cast<int>(records.size()) - escapes(); }

double CompletenessProbeReport::max_drift() const {
  double d = 0.0;
  for (const auto& r : records) d = std::max(d, r.energy_drift);
  return d;
}

CompletenessProbeReport completeness_probe(const MetricField& m, const std::vector<GeodesicState>& states, double t_max,
                                           int steps, const GeodesicOptions& opt) {
  CompletenessProbeReport rep;
  rep.t_max = t_max;
  rep.records.resize(2 * states.size());
  parallel_for(rep.records.size(), [&](std::size_t i) {
    const std::size_t k = i / 2;
    const int dir = (i % 2 == 0) ? 1 : -1;
    GeodesicState s = states[k];
    if (dir < 0) s.v = -1.0 * s.v;
    const GeodesicResult r = integrate_geodesic(m, s, t_max, steps, opt);
    rep.records[i] = {static_cast<int>(k), dir, r.event, r.event == GeodesicEvent::Survived ? t_max : r.t_end,
                      r.energy_drift};
  });
  return rep;
}

double gallot_H_check(const MetricField& cone, const GeodesicResult& traj, double time_power) {
  const auto& s = traj.samples;
  // The trailing event sample is off the uniform grid.
  std::size_t n = s.size();
  if (n >= 2 && traj.event != GeodesicEvent::Survived) --n;
  if (n < 5) throw ConfigError("gallot check needs at least five uniformly spaced samples");
  const double dt = s[1].t - s[0].t;
  auto H = [&](std::size_t i) {
    Vector h = (-std::pow(s[i].t, time_power)) * s[i].v;
    h[0] += s[i].x[0];
    return h;
  };
  double res = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    if (!cone.in_domain(s[i].x)) throw OutsideDomain("trajectory leaves the cone domain");
    const Vector dh = (1.0 / (12.0 * dt)) * (H(i - 2) - 8.0 * H(i - 1) + 8.0 * H(i + 1) - H(i + 2));
    const Vector cov = dh + christoffel(cone, s[i].x).contract(s[i].v, H(i));
    res = std::max(res, max_abs(cov));
  }
  return res;
}

ReachabilityReport reachability_check(double alpha0, double r0, int steps_per_unit) {
  if (!(alpha0 > 1.0)) throw DomainError("reachability needs alpha0 > 1");
  if (!(r0 > 0.0)) throw DomainError("reachability needs r0 > 0");
  ReachabilityReport rep;
  rep.alpha0 = alpha0;
  rep.r0 = r0;
  rep.L = std::sqrt(alpha0 * alpha0 - alpha0);
  rep.T1 = 1.0 / (rep.L + alpha0);
  rep.T2 = 1.0 / (rep.L - alpha0 + 1.0);
  rep.ordered = rep.T1 < 1.0 && 1.0 <= rep.T2;

  if (steps_per_unit <= 0) return rep;

  const MetricField cone = make_cone(make_example_cosh(line_metric("t")).metric);
  const double s0 = std::acosh(std::sqrt(alpha0));
  const double w = std::sinh(s0) * std::cosh(s0);  // -r0 X = w d_s
  const Point p{r0, s0, 0.0};
  auto escape = [&](double rho, double ws, double T, GeodesicEvent& ev) {
    const double t_max = 1.5 * T;
    const int steps = std::max(100, static_cast<int>(std::ceil(t_max * steps_per_unit)));
    const GeodesicResult r = integrate_geodesic(cone, GeodesicState::at(cone, p, {rho, ws, 0.0}), t_max, steps);
    ev = r.event;
    return r.event == GeodesicEvent::Survived ? kInf : r.t_end;
  };
  rep.numeric1 = escape(-r0 * alpha0, w, rep.T1, rep.event1);
  rep.numeric2 = escape(r0 * (alpha0 - 1.0), -w, rep.T2, rep.event2);
  return rep;
}

}  // namespace conehol
