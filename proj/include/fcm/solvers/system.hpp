#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fcm/contact/contact.hpp"
#include "fcm/fem/assembly.hpp"

namespace fcm::solvers {

//! One deformable body in a multi-body simulation.
template <int D>
struct Body {
  std::string name;
  const fem::Mesh<D>* mesh = nullptr;
  fem::Material material;
  std::vector<fem::BoundaryCondition> bcs;
  Vec<D> initial_velocity = Vec<D>::Zero();
};

//! Multi-body system: deformable bodies plus fixed rigid obstacles given as
//! analytic signed distance fields. Contact acts between every pair of
//! deformable bodies and every (body, obstacle) pair.
template <int D>
struct System {
  std::vector<Body<D>> bodies;
  std::vector<geo::SdfPtr<D>> obstacles;
  contact::ContactParams contact;

  int dof_offset(std::size_t body) const {
    int off = 0;
    for (std::size_t i = 0; i < body; ++i) off += bodies[i].mesh->n_dofs();
    return off;
  }
  int total_dofs() const { return dof_offset(bodies.size()); }
};

//! Aggregated contact evaluation over all pairs at given displacements.
template <int D>
struct ContactEval {
  std::vector<VecX> forces;    // per body
  double overlap_volume = 0.0;
  double energy = 0.0;
  fmc::EstimateDiagnostics diag;
};

template <int D>
ContactEval<D> evaluate_contact(const System<D>& sys,
                                const std::vector<VecX>& d,
                                std::uint64_t seed) {
  ContactEval<D> out;
  out.forces.resize(sys.bodies.size());
  for (std::size_t i = 0; i < sys.bodies.size(); ++i)
    out.forces[i] = VecX::Zero(sys.bodies[i].mesh->n_dofs());

  const auto absorb = [&](const contact::ContactForceResult& r, std::size_t i,
                          int j) {
    out.forces[i] += r.f1;
    if (j >= 0) out.forces[j] += r.f2;
    out.overlap_volume += r.overlap_volume;
    out.energy += r.energy;
    out.diag.crossings += r.diag.crossings;
    out.diag.dropped_tangent += r.diag.dropped_tangent;
    out.diag.refine_fallbacks += r.diag.refine_fallbacks;
  };

  std::uint64_t pair_tag = 0;
  for (std::size_t i = 0; i < sys.bodies.size(); ++i) {
    for (std::size_t j = i + 1; j < sys.bodies.size(); ++j)
      absorb(contact::contact_forces<D>(*sys.bodies[i].mesh, d[i],
                                        *sys.bodies[j].mesh, d[j], sys.contact,
                                        derive_seed(seed, pair_tag++)),
             i, static_cast<int>(j));
    for (const auto& obs : sys.obstacles)
      absorb(contact::contact_forces<D>(*sys.bodies[i].mesh, d[i], *obs,
                                        sys.contact,
                                        derive_seed(seed, pair_tag++)),
             i, -1);
  }
  return out;
}

//! True when no body/obstacle pair has intersecting bounding boxes at the
//! given displacements (contact forces are then exactly zero).
template <int D>
bool contact_free(const System<D>& sys, const std::vector<VecX>& d) {
  if (sys.bodies.size() < 2 && sys.obstacles.empty()) return true;
  std::vector<Box<D>> boxes;
  for (std::size_t i = 0; i < sys.bodies.size(); ++i) {
    Box<D> b;
    const auto& mesh = *sys.bodies[i].mesh;
    for (int n = 0; n < mesh.n_nodes(); ++n)
      b.absorb(mesh.deformed_node(n, d[i]));
    boxes.push_back(b);
  }
  for (std::size_t i = 0; i < sys.bodies.size(); ++i) {
    for (std::size_t j = i + 1; j < sys.bodies.size(); ++j)
      if (!Box<D>::intersect(boxes[i], boxes[j]).empty()) return false;
    for (const auto& obs : sys.obstacles)
      if (!Box<D>::intersect(boxes[i], obs->bounding_box()).empty())
        return false;
  }
  return true;
}

}  // namespace fcm::solvers
