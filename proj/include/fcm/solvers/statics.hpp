#pragma once

#include "fcm/solvers/linear.hpp"
#include "fcm/solvers/system.hpp"

namespace fcm::solvers {

struct StaticsConfig {
  double eps_outer = 1e-6;   // fixed-point tolerance on |d - d_n|
  double eps_inner = 1e-9;   // Newton residual tolerance
  int max_outer = 60;
  int max_inner = 30;
  double relaxation = 0.7;   // outer update damping in (0, 1]
  int load_steps = 10;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(eps_outer > 0.0 && eps_inner > 0.0))
      throw ConfigError("statics: tolerances must be positive");
    if (!(relaxation > 0.0 && relaxation <= 1.0))
      throw ConfigError("statics: relaxation must be in (0, 1]");
    if (load_steps < 1) throw ConfigError("statics: load_steps must be >= 1");
  }
};

struct NewtonReport {
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> residual_history;
};

//! Newton solve of the mechanical residual F_int(d) - F_ext(s) - F_cont = 0
//! at frozen contact force, with Dirichlet constraints at load fraction s
//! enforced by symmetric elimination of the tangent. `cache`, when given,
//! reuses the factorization across calls for linear materials.
template <int D>
NewtonReport newton_inner(const fem::Mesh<D>& mesh, const fem::Material& mat,
                          VecX& d, const std::vector<fem::BoundaryCondition>& bcs,
                          double s, const VecX& f_cont, double eps_inner,
                          int max_inner, SpdSolver* cache = nullptr);

//! Outcome of one converged load step.
template <int D>
struct LoadStepResult {
  double load_fraction = 0.0;
  std::vector<VecX> d;           // per body
  std::vector<VecX> f_cont;      // per body, last contact evaluation
  double overlap_volume = 0.0;
  double contact_energy = 0.0;
  int outer_iterations = 0;
  std::vector<Vec3> reaction_force;  // per body, Dirichlet reactions
};

//! Two-loop quasi-static solver: an outer fixed-point iteration on the
//! contact force (one fiber batch per outer iteration, frozen inside it)
//! around an inner Newton solve of the mechanical residual. The outer
//! update is relaxed; load steps traverse the schedule fraction uniformly.
template <int D>
class StaticSolver {
 public:
  StaticSolver(const System<D>& sys, const StaticsConfig& cfg);

  //! Runs all load steps; throws SolverError (with the fixed-point history
  //! in the message) if an outer loop fails to converge.
  std::vector<LoadStepResult<D>> solve(
      const std::function<void(const LoadStepResult<D>&)>& on_step = {});

 private:
  const System<D>* sys_;
  StaticsConfig cfg_;
  std::vector<std::unique_ptr<SpdSolver>> cache_;
};

}  // namespace fcm::solvers
