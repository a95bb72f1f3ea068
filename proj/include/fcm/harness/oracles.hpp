#pragma once

#include <map>
#include <string>
#include <vector>

#include "fcm/types.hpp"

namespace fcm::harness {

struct OracleCurve {
  std::string name;
  std::string abscissa;  // label incl. unit, e.g. "x [m]"
  std::string ordinate;
  std::vector<double> xs, ys;
};

//! Named curves and scalars of an analytical benchmark solution.
struct OracleResult {
  std::vector<OracleCurve> curves;
  std::map<std::string, double> scalars;

  const OracleCurve& curve(const std::string& name) const;
  double scalar(const std::string& name) const;
};

//! Plane-strain cylinder-on-plane contact under a uniform top pressure p:
//!   a  = 2 sqrt(2 R^2 p (1 - nu^2) / (E pi))
//!   p(x) = 4 R p / (pi a^2) sqrt(a^2 - x^2)
//! The profile normalization makes the contact integral equal the applied
//! load 2 R p exactly (checked by quadrature in the tests).
//! Scalars: half_width, peak_pressure, total_load. Curve: "pressure".
OracleResult hertz_oracle(double pressure, double radius, double E, double nu,
                          int samples = 201);

//! Rigid wedge on an elastic plane (plane strain), slope angle beta:
//!   p(x; a) = E* tan(beta)/pi artanh(sqrt(1 - x^2/a^2)),
//!   P(a) = E* tan(beta) a, surface profile on both branches.
//! Scalars: E_star, total_force, half_width, profile_peak (= a tan beta).
//! Curves: "pressure" on [-a, a], "profile" on [-3a, 3a].
OracleResult wedge_oracle(double a, double E, double nu, double beta_rad,
                          int samples = 201);

//! Rigid cone on an elastic half-space, slope angle beta:
//!   d = pi/2 a tan(beta), F_N = a E* d,
//!   p(r; a) = E* d / (pi a) arcosh(a/r) for r <= a.
//! Scalars: E_star, depth, normal_force, half_width.
//! Curves: "pressure" on (0, a], "profile" on [0, 3a].
OracleResult cone_oracle(double a, double E, double nu, double beta_rad,
                         int samples = 201);

//! Elastic bar dropped on a rigid obstacle, by characteristics: free fall,
//! a contact phase with constant interface pressure rho c0 v0 lasting
//! 2 L / c0, and rebound at the incoming speed.
//! Scalars: wave_speed, impact_time, contact_duration, plateau_pressure.
//! Curves: "pressure" and "tip_position" over [0, t_end].
OracleResult bar_impact_oracle(double L, double E, double rho, double v0,
                               double h0, int samples = 601);

}  // namespace fcm::harness
