#include "fcm/harness/oracles.hpp"

#include <cmath>

namespace fcm::harness {

const OracleCurve& OracleResult::curve(const std::string& name) const {
  for (const auto& c : curves)
    if (c.name == name) return c;
  throw ConfigError("oracle curve '" + name + "' not found");
}

double OracleResult::scalar(const std::string& name) const {
  auto it = scalars.find(name);
  if (it == scalars.end())
    throw ConfigError("oracle scalar '" + name + "' not found");
  return it->second;
}

OracleResult hertz_oracle(double pressure, double radius, double E, double nu,
                          int samples) {
  if (!(pressure > 0.0 && radius > 0.0 && E > 0.0))
    throw ConfigError("hertz oracle: p, R, E must be positive");
  if (!(nu > 0.0 && nu < 0.5))
    throw ConfigError("hertz oracle: nu must be in (0, 0.5)");
  const double a =
      2.0 * std::sqrt(2.0 * radius * radius * pressure * (1.0 - nu * nu) /
                      (E * kPi));
  const double peak = 4.0 * radius * pressure / (kPi * a);

  OracleResult r;
  r.scalars["half_width"] = a;
  r.scalars["peak_pressure"] = peak;
  r.scalars["total_load"] = 2.0 * radius * pressure;

  OracleCurve p;
  p.name = "pressure";
  p.abscissa = "x [m]";
  p.ordinate = "p [Pa]";
  for (int i = 0; i < samples; ++i) {
    const double x = -a + 2.0 * a * i / (samples - 1);
    p.xs.push_back(x);
    p.ys.push_back(peak / a * std::sqrt(std::max(0.0, a * a - x * x)));
  }
  r.curves.push_back(std::move(p));
  return r;
}

OracleResult wedge_oracle(double a, double E, double nu, double beta_rad,
                          int samples) {
  if (!(a > 0.0)) throw ConfigError("wedge oracle: a must be positive");
  if (!(beta_rad > 0.0 && beta_rad < kPi / 2))
    throw ConfigError("wedge oracle: beta must be in (0, 90) degrees");
  const double estar = E / (1.0 - nu * nu);
  const double tb = std::tan(beta_rad);

  OracleResult r;
  r.scalars["E_star"] = estar;
  r.scalars["half_width"] = a;
  r.scalars["total_force"] = estar * tb * a;
  r.scalars["profile_peak"] = a * tb;

  OracleCurve p;
  p.name = "pressure";
  p.abscissa = "x [m]";
  p.ordinate = "p [Pa]";
  for (int i = 0; i < samples; ++i) {
    const double x = -a + 2.0 * a * i / (samples - 1);
    const double u = std::max(0.0, 1.0 - (x * x) / (a * a));
    p.xs.push_back(x);
    p.ys.push_back(estar * tb / kPi * std::atanh(std::sqrt(u)));
  }
  r.curves.push_back(std::move(p));

  OracleCurve h;
  h.name = "profile";
  h.abscissa = "x [m]";
  h.ordinate = "h [m]";
  for (int i = 0; i < samples; ++i) {
    const double x = -3.0 * a + 6.0 * a * i / (samples - 1);
    const double ax = std::abs(x);
    double y;
    if (ax <= a) {
      y = tb * ax;
    } else {
      y = 2.0 * tb / kPi *
          (a * std::acosh(ax / a) + ax * std::asin(a / ax));
    }
    h.xs.push_back(x);
    h.ys.push_back(y);
  }
  r.curves.push_back(std::move(h));
  return r;
}

OracleResult cone_oracle(double a, double E, double nu, double beta_rad,
                         int samples) {
  if (!(a > 0.0)) throw ConfigError("cone oracle: a must be positive");
  if (!(beta_rad > 0.0 && beta_rad < kPi / 2))
    throw ConfigError("cone oracle: beta must be in (0, 90) degrees");
  const double estar = E / (1.0 - nu * nu);
  const double tb = std::tan(beta_rad);
  const double depth = 0.5 * kPi * a * tb;
  const double force = a * estar * depth;

  OracleResult r;
  r.scalars["E_star"] = estar;
  r.scalars["half_width"] = a;
  r.scalars["depth"] = depth;
  r.scalars["normal_force"] = force;

  OracleCurve p;
  p.name = "pressure";
  p.abscissa = "r [m]";
  p.ordinate = "p [Pa]";
  for (int i = 1; i <= samples; ++i) {
    const double rr = a * i / samples;
    p.xs.push_back(rr);
    p.ys.push_back(estar * depth / (kPi * a) * std::acosh(a / rr));
  }
  r.curves.push_back(std::move(p));

  OracleCurve h;
  h.name = "profile";
  h.abscissa = "r [m]";
  h.ordinate = "h [m]";
  for (int i = 0; i < samples; ++i) {
    const double rr = 3.0 * a * i / (samples - 1);
    double y;
    if (rr <= a) {
      y = tb * rr;
    } else {
      y = a * tb *
          (std::asin(a / rr) + (std::sqrt(rr * rr - a * a) - rr) / a);
    }
    h.xs.push_back(rr);
    h.ys.push_back(y);
  }
  r.curves.push_back(std::move(h));
  return r;
}

OracleResult bar_impact_oracle(double L, double E, double rho, double v0,
                               double h0, int samples) {
  if (!(L > 0.0 && E > 0.0 && rho > 0.0 && v0 > 0.0 && h0 > 0.0))
    throw ConfigError("bar oracle: all parameters must be positive");
  const double c0 = std::sqrt(E / rho);
  const double t1 = h0 / v0;            // first touch
  const double dur = 2.0 * L / c0;      // release when the wave returns
  const double plateau = rho * c0 * v0;
  const double t_end = t1 + dur + 0.5 * (t1 + dur);

  OracleResult r;
  r.scalars["wave_speed"] = c0;
  r.scalars["impact_time"] = t1;
  r.scalars["contact_duration"] = dur;
  r.scalars["plateau_pressure"] = plateau;

  OracleCurve p, tip;
  p.name = "pressure";
  p.abscissa = "t [s]";
  p.ordinate = "p [Pa]";
  tip.name = "tip_position";
  tip.abscissa = "t [s]";
  tip.ordinate = "u [m]";
  for (int i = 0; i < samples; ++i) {
    const double t = t_end * i / (samples - 1);
    p.xs.push_back(t);
    p.ys.push_back(t >= t1 && t < t1 + dur ? plateau : 0.0);
    tip.xs.push_back(t);
    double u;
    if (t < t1)
      u = h0 - v0 * t;
    else if (t < t1 + dur)
      u = 0.0;
    else
      u = v0 * (t - t1 - dur);
    tip.ys.push_back(u);
  }
  r.curves.push_back(std::move(p));
  r.curves.push_back(std::move(tip));
  return r;
}

}  // namespace fcm::harness
