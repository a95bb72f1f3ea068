#pragma once

#include "fcm/types.hpp"

namespace fcm::fem {

//! Isotropic material: small-strain linear elasticity (lambda, mu) or a
//! compressible Neo-Hookean law W = G/2 (J^(-2/3) I1 - 3) + K/2 (J-1)^2.
struct Material {
  enum class Law { LinearElastic, NeoHookean };

  Law law = Law::LinearElastic;
  double E = 0.0, nu = 0.0;   // engineering constants
  double lambda = 0.0, mu = 0.0;
  double G = 0.0, K = 0.0;
  double rho0 = 1.0;          // reference density

  static Material linear_elastic(double E, double nu, double rho0) {
    check_enu(E, nu, rho0);
    Material m;
    m.law = Law::LinearElastic;
    m.E = E;
    m.nu = nu;
    m.rho0 = rho0;
    m.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    m.mu = E / (2.0 * (1.0 + nu));
    return m;
  }

  //! Neo-Hookean from engineering constants:
  //! G = E / [2(1+nu)], K = E / [3(1-2nu)].
  static Material neo_hookean(double E, double nu, double rho0) {
    check_enu(E, nu, rho0);
    Material m;
    m.law = Law::NeoHookean;
    m.E = E;
    m.nu = nu;
    m.rho0 = rho0;
    m.G = E / (2.0 * (1.0 + nu));
    m.K = E / (3.0 * (1.0 - 2.0 * nu));
    return m;
  }

  //! Stiffness scalar for wave-speed estimates; the small-strain limit
  //! E = 9KG/(3K+G) is used for the Neo-Hookean law.
  double stiffness_modulus() const {
    if (law == Law::LinearElastic) return E;
    return 9.0 * K * G / (3.0 * K + G);
  }

 private:
  static void check_enu(double E, double nu, double rho0) {
    if (!(E > 0.0)) throw ConfigError("material: E must be positive");
    if (!(nu > -1.0 && nu < 0.5))
      throw ConfigError("material: nu must lie in (-1, 0.5)");
    if (!(rho0 > 0.0)) throw ConfigError("material: rho0 must be positive");
  }
};

}  // namespace fcm::fem
