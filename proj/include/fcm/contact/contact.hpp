#pragma once

#include <cstdint>

#include "fcm/fmc/estimate.hpp"
#include "fcm/geometry/mesh_boundary.hpp"

namespace fcm::contact {

enum class SeedPolicy { FreshPerStep, FrozenPerOuterIteration };

//! Volume-based contact law: energy w = k * Vc^m over the overlap volume,
//! forces as its negative displacement gradient.
struct ContactParams {
  double k = 1.0;              // normal stiffness, energy per volume^m
  double m = 1.0;              // exponent, >= 1 so forces stay finite at Vc=0
  std::int64_t fibers = 10000;
  double fiber_length = 0.0;   // 0: twice the mean boundary facet diameter
  SeedPolicy seed_policy = SeedPolicy::FreshPerStep;
  double eps_tangent_rel = 1e-8;
  int subdivisions = 16;

  void validate() const {
    if (!(k > 0.0)) throw ConfigError("contact: k must be positive");
    if (!(m >= 1.0)) throw ConfigError("contact: m must be >= 1");
    if (fibers <= 0) throw ConfigError("contact: fiber count must be positive");
  }

  fmc::CrossingOptions crossing_options() const {
    fmc::CrossingOptions o;
    o.subdivisions = subdivisions;
    o.eps_tangent_rel = eps_tangent_rel;
    return o;
  }
};

struct ContactForceResult {
  VecX f1, f2;                 // nodal forces on each body
  double overlap_volume = 0.0;
  double energy = 0.0;
  std::int64_t fiber_count = 0;
  std::uint64_t seed = 0;
  fmc::EstimateDiagnostics diag;
};

//! w(Vc) = k Vc^m.
inline double contact_energy(double vc, const ContactParams& p) {
  if (vc < 0.0) throw ConfigError("contact energy: negative overlap volume");
  if (vc == 0.0) return 0.0;
  return p.k * std::pow(vc, p.m);
}

//! Contact forces between two deformed bodies.
//!
//! One fiber batch is sampled over the shared domain (the intersection of
//! the deformed bounding boxes, inflated by the fiber length and snapped
//! outward to a dyadic grid) and both force vectors come from the same
//! estimate, so action-reaction error is estimator noise only. The
//! evaluation runs in a local frame anchored at the domain corner, which
//! keeps results bit-identical under rigid frame translations of exactly
//! representable data; snapping keeps the domain stable under small
//! displacement perturbations so frozen-seed finite differences see a
//! fixed batch. Disjoint bounding boxes short-circuit to exact zeros
//! without sampling.
template <int D>
ContactForceResult contact_forces(const fem::Mesh<D>& mesh1, const VecX& d1,
                                  const fem::Mesh<D>& mesh2, const VecX& d2,
                                  const ContactParams& params,
                                  std::uint64_t seed);

//! Same, against a fixed rigid obstacle: only the body receives forces.
template <int D>
ContactForceResult contact_forces(const fem::Mesh<D>& mesh1, const VecX& d1,
                                  const geo::Sdf<D>& rigid,
                                  const ContactParams& params,
                                  std::uint64_t seed);

}  // namespace fcm::contact
