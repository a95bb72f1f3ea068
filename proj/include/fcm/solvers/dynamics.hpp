#pragma once

#include <functional>

#include "fcm/solvers/system.hpp"

namespace fcm::solvers {

struct DynamicsConfig {
  double dt = 0.0;       // explicit step; <= 0 derives it from the CFL number
  double cfl = 0.5;
  double t_end = 1.0;
  int output_every = 1;  // energy/output cadence in steps
  std::uint64_t seed = 1;

  void validate() const {
    if (dt <= 0.0 && !(cfl > 0.0 && cfl <= 1.0))
      throw ConfigError("dynamics: need dt > 0 or CFL in (0, 1]");
    if (!(t_end > 0.0)) throw ConfigError("dynamics: t_end must be positive");
  }
};

//! Stable explicit step from the CFL condition: dt = CFL * dx_min / c0 with
//! elastic wave speed c0 = sqrt(E / rho).
template <int D>
double cfl_dt(const fem::Mesh<D>& mesh, const fem::Material& mat, double cfl) {
  const double c0 = std::sqrt(mat.stiffness_modulus() / mat.rho0);
  return cfl * mesh.min_edge_length() / c0;
}

//! Generic kick-drift-kick leapfrog step on a lumped-mass system:
//!   v += a dt/2;  d += v dt;  a = force(d, t+dt) / m;  v += a dt/2.
//! The caller keeps `a` consistent with forces at the current state
//! (bootstrap with one force evaluation before the first step).
struct KdkState {
  VecX d, v, a;
  double t = 0.0;
};

template <class ForceFn>
void kdk_step(KdkState& st, const VecX& mass, double dt, ForceFn&& force) {
  st.v += 0.5 * dt * st.a;
  st.d += dt * st.v;
  st.t += dt;
  const VecX f = force(st.d, st.t);
  st.a = f.cwiseQuotient(mass);
  st.v += 0.5 * dt * st.a;
}

//! Per-record energy and force bookkeeping of a dynamic run.
struct EnergyRecord {
  std::int64_t step = 0;
  double t = 0.0;
  double kinetic = 0.0;
  double strain = 0.0;
  double contact = 0.0;
  double total = 0.0;
  double overlap_volume = 0.0;
  std::vector<Vec3> contact_force;    // per body, padded to 3 components
  std::vector<Vec3> reaction_force;   // per body, Dirichlet reactions
};

//! Explicit dynamic contact solver: symplectic leapfrog time loop with a
//! fresh fiber seed derived per step. Dirichlet constraints override
//! displacement/velocity from their schedules; damping is not modeled.
template <int D>
class DynamicSolver {
 public:
  DynamicSolver(const System<D>& sys, const DynamicsConfig& cfg);

  //! Advances one step of size dt().
  void step();

  //! Runs to t_end, recording energies at the configured cadence and
  //! invoking on_record (if set) for output emission.
  std::vector<EnergyRecord> run(
      const std::function<void(const EnergyRecord&)>& on_record = {});

  double dt() const { return dt_; }
  double time() const { return t_; }
  std::int64_t step_index() const { return step_; }
  const std::vector<VecX>& displacements() const { return d_; }
  const std::vector<VecX>& velocities() const { return v_; }
  EnergyRecord record() const;

 private:
  void apply_dirichlet(double t);
  void evaluate_forces(double t);

  const System<D>* sys_;
  DynamicsConfig cfg_;
  double dt_ = 0.0;
  double t_ = 0.0;
  std::int64_t step_ = 0;
  std::vector<VecX> d_, v_, a_, mass_;
  std::vector<VecX> f_cont_, f_int_, f_ext_;
  ContactEval<D> last_contact_;
};

}  // namespace fcm::solvers
