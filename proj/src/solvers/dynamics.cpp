#include "fcm/solvers/dynamics.hpp"

namespace fcm::solvers {

template <int D>
DynamicSolver<D>::DynamicSolver(const System<D>& sys,
                                const DynamicsConfig& cfg)
    : sys_(&sys), cfg_(cfg) {
  cfg_.validate();
  if (sys.bodies.empty()) throw ConfigError("dynamics: no bodies");
  dt_ = cfg.dt;
  if (dt_ <= 0.0) {
    dt_ = std::numeric_limits<double>::infinity();
    for (const auto& b : sys.bodies)
      dt_ = std::min(dt_, cfl_dt(*b.mesh, b.material, cfg.cfl));
  }

  for (const auto& b : sys.bodies) {
    fem::validate_bcs(*b.mesh, b.bcs);
    const int nd = b.mesh->n_dofs();
    d_.push_back(VecX::Zero(nd));
    VecX v = VecX::Zero(nd);
    for (int n = 0; n < b.mesh->n_nodes(); ++n)
      for (int k = 0; k < D; ++k)
        v[fem::Mesh<D>::dof(n, k)] = b.initial_velocity[k];
    v_.push_back(v);
    a_.push_back(VecX::Zero(nd));
    mass_.push_back(fem::lumped_mass(*b.mesh, b.material.rho0));
    if (!(mass_.back().minCoeff() > 0.0))
      throw ConfigError("dynamics: lumped mass has non-positive entries");
  }

  // Bootstrap a0 from one force evaluation at t = 0.
  apply_dirichlet(0.0);
  evaluate_forces(0.0);
  for (std::size_t i = 0; i < d_.size(); ++i) {
    a_[i] = (f_ext_[i] + f_cont_[i] - f_int_[i]).cwiseQuotient(mass_[i]);
    for (const auto& en : fem::dirichlet_at(*sys_->bodies[i].mesh,
                                            sys_->bodies[i].bcs, 0.0))
      a_[i][en.dof] = 0.0;
  }
}

template <int D>
void DynamicSolver<D>::apply_dirichlet(double t) {
  for (std::size_t i = 0; i < d_.size(); ++i) {
    for (const auto& en :
         fem::dirichlet_at(*sys_->bodies[i].mesh, sys_->bodies[i].bcs, t)) {
      d_[i][en.dof] = en.value;
      v_[i][en.dof] = en.rate;
    }
  }
}

template <int D>
void DynamicSolver<D>::evaluate_forces(double t) {
  // Fresh fibers per step by default; the frozen policy pins one batch so
  // the contact force is a deterministic potential (no stochastic pumping
  // of undamped modes), at the price of one seed's estimator bias.
  const std::uint64_t seed =
      sys_->contact.seed_policy == contact::SeedPolicy::FreshPerStep
          ? derive_seed(cfg_.seed, static_cast<std::uint64_t>(step_))
          : derive_seed(cfg_.seed, 0xf1be0b42c4ULL);
  last_contact_ = evaluate_contact(*sys_, d_, seed);
  f_cont_ = last_contact_.forces;
  f_int_.clear();
  f_ext_.clear();
  for (std::size_t i = 0; i < d_.size(); ++i) {
    const auto& b = sys_->bodies[i];
    f_int_.push_back(fem::internal_force(*b.mesh, b.material, d_[i]));
    f_ext_.push_back(fem::external_force(*b.mesh, b.bcs, t));
  }
}

template <int D>
void DynamicSolver<D>::step() {
  const double t1 = t_ + dt_;
  for (std::size_t i = 0; i < d_.size(); ++i) {
    v_[i] += 0.5 * dt_ * a_[i];
    d_[i] += dt_ * v_[i];
  }
  apply_dirichlet(t1);
  step_ += 1;
  evaluate_forces(t1);
  for (std::size_t i = 0; i < d_.size(); ++i) {
    a_[i] = (f_ext_[i] + f_cont_[i] - f_int_[i]).cwiseQuotient(mass_[i]);
    for (const auto& en :
         fem::dirichlet_at(*sys_->bodies[i].mesh, sys_->bodies[i].bcs, t1))
      a_[i][en.dof] = 0.0;
    v_[i] += 0.5 * dt_ * a_[i];
    // Prescribed velocities win over the kick on constrained dofs.
    for (const auto& en :
         fem::dirichlet_at(*sys_->bodies[i].mesh, sys_->bodies[i].bcs, t1))
      v_[i][en.dof] = en.rate;
    if (!d_[i].allFinite() || !v_[i].allFinite())
      throw SolverError("dynamics diverged at step " + std::to_string(step_));
  }
  t_ = t1;
}

template <int D>
EnergyRecord DynamicSolver<D>::record() const {
  EnergyRecord r;
  r.step = step_;
  r.t = t_;
  for (std::size_t i = 0; i < d_.size(); ++i) {
    const auto& b = sys_->bodies[i];
    r.kinetic += 0.5 * v_[i].cwiseProduct(v_[i]).dot(mass_[i]);
    r.strain += fem::strain_energy(*b.mesh, b.material, d_[i]);
    Vec3 cf = Vec3::Zero(), rf = Vec3::Zero();
    const VecX reaction = f_int_[i] - f_ext_[i] - f_cont_[i] +
                          mass_[i].cwiseProduct(a_[i]);
    for (int n = 0; n < b.mesh->n_nodes(); ++n)
      for (int k = 0; k < D; ++k)
        cf[k] += f_cont_[i][fem::Mesh<D>::dof(n, k)];
    for (const auto& en : fem::dirichlet_at(*b.mesh, b.bcs, t_))
      rf[en.dof % D] += reaction[en.dof];
    r.contact_force.push_back(cf);
    r.reaction_force.push_back(rf);
  }
  r.contact = last_contact_.energy;
  r.overlap_volume = last_contact_.overlap_volume;
  r.total = r.kinetic + r.strain + r.contact;
  return r;
}

template <int D>
std::vector<EnergyRecord> DynamicSolver<D>::run(
    const std::function<void(const EnergyRecord&)>& on_record) {
  std::vector<EnergyRecord> records;
  const auto emit = [&]() {
    records.push_back(record());
    if (on_record) on_record(records.back());
  };
  emit();
  const std::int64_t nsteps =
      static_cast<std::int64_t>(std::ceil(cfg_.t_end / dt_ - 1e-12));
  for (std::int64_t s = 0; s < nsteps; ++s) {
    step();
    if (step_ % std::max(1, cfg_.output_every) == 0 || s + 1 == nsteps) emit();
  }
  return records;
}

template class DynamicSolver<2>;
template class DynamicSolver<3>;

}  // namespace fcm::solvers
