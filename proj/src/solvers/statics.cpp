#include "fcm/solvers/statics.hpp"

#include <sstream>

namespace fcm::solvers {

namespace {

//! Residual with Dirichlet rows replaced by the constraint violation.
template <int D>
VecX static_residual(const fem::Mesh<D>& mesh, const fem::Material& mat,
                     const VecX& d, const std::vector<fem::BoundaryCondition>& bcs,
                     double s, const VecX& f_cont) {
  VecX r = fem::internal_force(mesh, mat, d) - fem::external_force(mesh, bcs, s);
  if (f_cont.size() == r.size()) r -= f_cont;
  for (const auto& en : fem::dirichlet_at(mesh, bcs, s))
    r[en.dof] = d[en.dof] - en.value;
  return r;
}

//! Zeroes constrained rows/columns and puts ones on their diagonal; the
//! eliminated matrix stays symmetric positive definite.
void eliminate(fem::SpMat& A, const std::vector<char>& constrained) {
  for (int k = 0; k < A.outerSize(); ++k)
    for (fem::SpMat::InnerIterator it(A, k); it; ++it)
      if (constrained[it.row()] || constrained[it.col()])
        it.valueRef() = it.row() == it.col() ? 1.0 : 0.0;
}

}  // namespace

template <int D>
NewtonReport newton_inner(const fem::Mesh<D>& mesh, const fem::Material& mat,
                          VecX& d, const std::vector<fem::BoundaryCondition>& bcs,
                          double s, const VecX& f_cont, double eps_inner,
                          int max_inner, SpdSolver* cache) {
  const auto entries = fem::dirichlet_at(mesh, bcs, s);
  std::vector<char> constrained(mesh.n_dofs(), 0);
  for (const auto& en : entries) constrained[en.dof] = 1;
  // Constrained dofs are not unknowns: pin them to their targets so the
  // iteration runs on the free dofs only.
  for (const auto& en : entries) d[en.dof] = en.value;
  const bool linear = mat.law == fem::Material::Law::LinearElastic;

  SpdSolver local;
  SpdSolver* solver = cache ? cache : &local;

  NewtonReport rep;
  for (int it = 0;; ++it) {
    VecX r = static_residual(mesh, mat, d, bcs, s, f_cont);
    rep.residual_norm = r.norm();
    rep.residual_history.push_back(rep.residual_norm);
    if (rep.residual_norm <= eps_inner) {
      rep.iterations = it;
      return rep;
    }
    if (it >= max_inner)
      throw SolverError("newton: no convergence after " +
                        std::to_string(max_inner) + " iterations (|R| = " +
                        std::to_string(rep.residual_norm) + ")");

    if (!(linear && solver->factored())) {
      fem::SpMat K = fem::tangent_stiffness(mesh, mat, d);
      eliminate(K, constrained);
      solver->factor(K);
    }
    for (const auto& en : entries) r[en.dof] = 0.0;
    d += solver->solve(-r);
  }
}

template <int D>
StaticSolver<D>::StaticSolver(const System<D>& sys, const StaticsConfig& cfg)
    : sys_(&sys), cfg_(cfg) {
  cfg_.validate();
  if (sys.bodies.empty()) throw ConfigError("statics: no bodies");
  for (const auto& b : sys.bodies) fem::validate_bcs(*b.mesh, b.bcs);
  for (std::size_t i = 0; i < sys.bodies.size(); ++i)
    cache_.push_back(std::make_unique<SpdSolver>());
}

template <int D>
std::vector<LoadStepResult<D>> StaticSolver<D>::solve(
    const std::function<void(const LoadStepResult<D>&)>& on_step) {
  const std::size_t nb = sys_->bodies.size();
  std::vector<VecX> d(nb);
  for (std::size_t i = 0; i < nb; ++i)
    d[i] = VecX::Zero(sys_->bodies[i].mesh->n_dofs());

  std::vector<LoadStepResult<D>> results;
  for (int step = 1; step <= cfg_.load_steps; ++step) {
    const double s = static_cast<double>(step) / cfg_.load_steps;
    std::vector<double> history;
    ContactEval<D> ce;
    bool converged = false;
    int outer = 0;
    while (outer < cfg_.max_outer && !converged) {
      // Contact force at d_n, frozen for the inner solve; one fresh fiber
      // batch per outer iteration.
      const std::uint64_t eval_seed =
          derive_seed(cfg_.seed, static_cast<std::uint64_t>(step),
                      static_cast<std::uint64_t>(outer));
      const bool free_now = contact_free(*sys_, d);
      if (free_now) {
        ce = ContactEval<D>{};
        ce.forces.resize(nb);
        for (std::size_t i = 0; i < nb; ++i)
          ce.forces[i] = VecX::Zero(sys_->bodies[i].mesh->n_dofs());
      } else {
        ce = evaluate_contact(*sys_, d, eval_seed);
      }

      std::vector<VecX> d_new = d;
      for (std::size_t i = 0; i < nb; ++i) {
        const auto& b = sys_->bodies[i];
        newton_inner(*b.mesh, b.material, d_new[i], b.bcs, s, ce.forces[i],
                     cfg_.eps_inner, cfg_.max_inner, cache_[i].get());
      }
      ++outer;

      if (free_now && contact_free(*sys_, d_new)) {
        // Zero contact force is provably self-consistent: accept directly.
        d = d_new;
        converged = true;
        break;
      }

      // Fixed-point displacement change, measured before relaxation. On
      // convergence the Newton solution is consistent with the frozen
      // contact force and is accepted as is; otherwise the update is
      // relaxed to damp oscillation between contact states.
      double delta2 = 0.0;
      for (std::size_t i = 0; i < nb; ++i)
        delta2 += (d_new[i] - d[i]).squaredNorm();
      history.push_back(std::sqrt(delta2));
      converged = history.back() <= cfg_.eps_outer;
      for (std::size_t i = 0; i < nb; ++i) {
        if (converged)
          d[i] = d_new[i];
        else
          d[i] += cfg_.relaxation * (d_new[i] - d[i]);
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "quasi-static: outer fixed point did not converge at load step "
         << step << "; |d - d_n| history:";
      for (double h : history) os << " " << h;
      throw SolverError(os.str());
    }

    LoadStepResult<D> res;
    res.load_fraction = s;
    res.d = d;
    res.f_cont = ce.forces;
    res.overlap_volume = ce.overlap_volume;
    res.contact_energy = ce.energy;
    res.outer_iterations = outer;
    for (std::size_t i = 0; i < nb; ++i) {
      const auto& b = sys_->bodies[i];
      const VecX reaction = fem::internal_force(*b.mesh, b.material, d[i]) -
                            fem::external_force(*b.mesh, b.bcs, s) -
                            ce.forces[i];
      Vec3 rf = Vec3::Zero();
      for (const auto& en : fem::dirichlet_at(*b.mesh, b.bcs, s))
        rf[en.dof % D] += reaction[en.dof];
      res.reaction_force.push_back(rf);
    }
    results.push_back(res);
    if (on_step) on_step(results.back());
  }
  return results;
}

template NewtonReport newton_inner<2>(const fem::Mesh<2>&, const fem::Material&,
                                      VecX&,
                                      const std::vector<fem::BoundaryCondition>&,
                                      double, const VecX&, double, int,
                                      SpdSolver*);
template NewtonReport newton_inner<3>(const fem::Mesh<3>&, const fem::Material&,
                                      VecX&,
                                      const std::vector<fem::BoundaryCondition>&,
                                      double, const VecX&, double, int,
                                      SpdSolver*);
template class StaticSolver<2>;
template class StaticSolver<3>;

}  // namespace fcm::solvers
