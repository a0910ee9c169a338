#pragma once

// Geodesic integration with event detection, closed forms on cones and the
// geodesic reduction of doubly warped products.

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "conehol/geometry.hpp"
#include "conehol/metric_zoo.hpp"

namespace conehol {

struct GeodesicState {
  Point x;
  Vector v;
  double energy = 0.0;  // g(v, v)

  static GeodesicState at(const MetricField& m, Point x, Vector v);
};

enum class GeodesicEvent { Survived, EscapedDomain, BlewUp };
std::string to_string(GeodesicEvent e);

struct TrajectorySample {
  double t = 0.0;
  Point x;
  Vector v;
  double energy = 0.0;
};

struct GeodesicOptions {
  double drift_tol = 1e-8;     // allowed |dE| / max(1, |E0|) per unit parameter
  double boundary_tol = 1e-6;  // resolution of domain-exit times
  double blowup = 1e8;         // |x| or |v| beyond this ends the run
  double min_step = 1e-13;
};

struct GeodesicResult {
  std::vector<TrajectorySample> samples;  // t = k * t_max / steps, plus the final state
  GeodesicEvent event = GeodesicEvent::Survived;
  double t_end = 0.0;
  double energy_drift = 0.0;  // max |E - E0| / max(1, |E0|)
  long steps_taken = 0;
};

/// RK4 on x'' = -Gamma(x', x'). The nominal step is t_max / steps; it is
/// halved whenever a step changes the energy by more than the drift budget,
/// and near a domain boundary until the exit time is resolved.
GeodesicResult integrate_geodesic(const MetricField& m, const GeodesicState& s0, double t_max, int steps,
                                  const GeodesicOptions& opt = {});

void write_trajectory_csv(std::ostream& os, const GeodesicResult& r, const std::vector<std::string>& coords);

enum class CausalCase { Lightlike, Spacelike, Timelike };
std::string to_string(CausalCase c);

/// Cone geodesic t -> (r(t), beta(f(t))) with r(0) = r, r'(0) = rho, f(0) = 0,
/// f'(0) = 1 and g(beta', beta') = 0, +L^2 or -L^2.
struct ConeGeodesicClosedForm {
  double r = 1.0;
  double rho = 0.0;
  double L = 0.0;
  CausalCase kind = CausalCase::Lightlike;
  double T = 0.0;  // maximal parameter, may be +inf

  static ConeGeodesicClosedForm make(double r, double rho, double L, CausalCase kind);
};

struct ConeGeodesicValue {
  double r = 0.0;
  double f = 0.0;
};

ConeGeodesicValue cone_geodesic_closed_form(const ConeGeodesicClosedForm& p, double t);

/// Geodesic of eps ds^2 + f1^2 g1 + f2^2 g2 whose factor components move along
/// factor geodesics with arclength parameters u1, u2 of causal signs eps1, eps2.
struct WarpedGeodesicState {
  double s = 0.0, u1 = 0.0, u2 = 0.0;
  double ds = 0.0, du1 = 0.0, du2 = 0.0;
};

struct WarpedAcceleration {
  double s = 0.0, u1 = 0.0, u2 = 0.0;
};

WarpedAcceleration warped_geodesic_rhs(const WarpedSpec& spec, int eps1, int eps2, const WarpedGeodesicState& st);

/// RK4 on the reduced system; returns the state at each of the steps + 1 nodes.
std::vector<WarpedGeodesicState> integrate_warped_geodesic(const WarpedSpec& spec, int eps1, int eps2,
                                                           const WarpedGeodesicState& st, double t_max, int steps);

struct ProbeRecord {
  int state = 0;
  int direction = 1;  // +1 forward, -1 backward
  GeodesicEvent event = GeodesicEvent::Survived;
  double t = 0.0;  // event time, or t_max when the run survived
  double energy_drift = 0.0;
};

/// Heuristic evidence only: a survived run says nothing beyond t_max.
struct CompletenessProbeReport {
  std::vector<ProbeRecord> records;
  double t_max = 0.0;
  int escapes() const;
  int survivors() const;
  double max_drift() const;
};

CompletenessProbeReport completeness_probe(const MetricField& m, const std::vector<GeodesicState>& states, double t_max,
                                           int steps, const GeodesicOptions& opt = {});

/// max |nabla_{Gamma'} H| along a cone geodesic for H(t) = r d_r - t^p Gamma'(t)
/// (p = 1 gives the parallel field). Derivatives of H are five-point stencils on
/// the uniformly spaced samples.
double gallot_H_check(const MetricField& cone, const GeodesicResult& traj, double time_power = 1.0);

/// The two geodesics with initial velocities -r0 X1 and -r0 X2 on the cone over
/// -ds^2 + cosh(s)^2 dt^2, started where alpha = cosh(s)^2 = alpha0.
struct ReachabilityReport {
  double alpha0 = 0.0, r0 = 0.0, L = 0.0;
  double T1 = 0.0, T2 = 0.0;
  double numeric1 = std::numeric_limits<double>::quiet_NaN();
  double numeric2 = std::numeric_limits<double>::quiet_NaN();
  GeodesicEvent event1 = GeodesicEvent::Survived, event2 = GeodesicEvent::Survived;
  bool ordered = false;  // T1 < 1 <= T2
};

/// steps_per_unit = 0 skips the numerical escape times (left at NaN).
ReachabilityReport reachability_check(double alpha0, double r0 = 1.0, int steps_per_unit = 2000);

}  // namespace conehol
