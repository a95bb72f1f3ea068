#pragma once

#include <cstdint>

#include "fcm/fmc/crossings.hpp"
#include "fcm/geometry/families.hpp"
#include "fcm/geometry/mesh_boundary.hpp"
#include "fcm/geometry/sdf.hpp"

namespace fcm::fmc {

struct EstimateDiagnostics {
  std::int64_t crossings = 0;
  std::int64_t dropped_tangent = 0;  // crossings excluded by the guard
  std::int64_t refine_fallbacks = 0;
};

//! Overlap measure estimate with provenance. `theta_gradient` is filled by
//! the scalar-parameter estimator, `nodal_gradient` by the nodal one.
struct VolumeEstimate {
  double value = 0.0;
  double theta_gradient = 0.0;
  VecX nodal_gradient;
  std::int64_t fiber_count = 0;
  std::uint64_t seed = 0;
  EstimateDiagnostics diag;
};

namespace detail {

//! Shared fiber loop, block-parallel with a deterministic reduction: fibers
//! are processed in fixed-size blocks (each serial, with its own copy of
//! the crossing callback) and the per-block partials are combined in block
//! order, so results are bit-identical for any worker count.
template <int D, class Field, class OnCrossing>
VolumeEstimate sweep(const FiberBatch<D>& batch, const Field& field,
                     const CrossingOptions& opts, OnCrossing on_crossing) {
  if (batch.size() == 0) throw ConfigError("empty batch");
  constexpr std::int64_t kBlock = 2048;
  const std::int64_t n = batch.size();
  const std::int64_t nblocks = (n + kBlock - 1) / kBlock;

  std::vector<VolumeEstimate> partials(nblocks);
  std::vector<double> fracs(nblocks, 0.0);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t blk = 0; blk < nblocks; ++blk) {
    OnCrossing visit = on_crossing;  // per-block scratch state
    VolumeEstimate& est = partials[blk];
    double frac = 0.0;
    const std::int64_t end = std::min(n, (blk + 1) * kBlock);
    for (std::int64_t i = blk * kBlock; i < end; ++i) {
      const Fiber<D>& f = batch.fibers[i];
      const FiberCrossings fc = find_crossings(f, field, opts);
      frac += fc.inside_fraction;
      est.diag.crossings += static_cast<std::int64_t>(fc.crossings.size());
      if (fc.refine_fallback) est.diag.refine_fallbacks += 1;
      for (const Crossing& c : fc.crossings) {
        if (c.orientation == 0) continue;
        visit(f, c.h, static_cast<double>(c.orientation), est);
      }
    }
    fracs[blk] = frac;
  }

  VolumeEstimate est;
  est.fiber_count = n;
  est.seed = batch.seed;
  double frac_sum = 0.0;
  for (std::int64_t blk = 0; blk < nblocks; ++blk) {
    frac_sum += fracs[blk];
    est.theta_gradient += partials[blk].theta_gradient;
    if (partials[blk].nodal_gradient.size() > 0) {
      if (est.nodal_gradient.size() == 0)
        est.nodal_gradient = VecX::Zero(partials[blk].nodal_gradient.size());
      est.nodal_gradient += partials[blk].nodal_gradient;
    }
    est.diag.crossings += partials[blk].diag.crossings;
    est.diag.dropped_tangent += partials[blk].diag.dropped_tangent;
    est.diag.refine_fallbacks += partials[blk].diag.refine_fallbacks;
  }
  est.value = batch.domain.measure() * frac_sum / static_cast<double>(n);
  return est;
}

}  // namespace detail

//! Volume (area in 2D) of the inside region seen by the batch:
//!   |domain| * mean(inside fraction per fiber).
//! Unbiased for regions at least one fiber length away from the domain
//! boundary; exactly |domain| when the region covers the inflated domain.
template <int D>
VolumeEstimate estimate_volume(const FiberBatch<D>& batch,
                               const geo::Sdf<D>& shape,
                               const CrossingOptions& opts = {}) {
  const auto field = [&](const Vec<D>& x) { return shape.value(x); };
  return detail::sweep(batch, field, opts,
                       [](const Fiber<D>&, double, double, VolumeEstimate&) {});
}

//! Value plus d(value)/d(theta) for a one-parameter shape family, via the
//! implicit sensitivity of each crossing:
//!   dh/dtheta = -(dg/dtheta) / (grad g . (end - start)).
template <int D>
VolumeEstimate estimate_gradient(const FiberBatch<D>& batch,
                                 const geo::ParamSdfFamily<D>& family,
                                 double theta,
                                 const CrossingOptions& opts = {}) {
  const auto field = [&](const Vec<D>& x) { return family.value(theta, x); };
  const double weight =
      batch.domain.measure() / static_cast<double>(std::max<std::int64_t>(
                                   1, batch.size()));
  const double denom_floor = opts.eps_tangent_rel * batch.length;
  return detail::sweep(
      batch, field, opts,
      [&](const Fiber<D>& f, double h, double sigma, VolumeEstimate& est) {
        const Vec<D> dir = f.end - f.start;
        const Vec<D> alpha = f.start + h * dir;
        const double denom = family.gradient(theta, alpha).dot(dir);
        if (std::abs(denom) < denom_floor) {
          est.diag.dropped_tangent += 1;
          return;
        }
        const double dh = -family.theta_derivative(theta, alpha) / denom;
        est.theta_gradient += weight * sigma * dh;
      });
}

//! One side of a two-body overlap: a field to evaluate plus, when the body
//! is deformable, the boundary snapshot supplying displacement sensitivities
//! at `dof_offset` in the concatenated gradient. Rigid sides carry none.
template <int D>
struct GradientSide {
  const geo::Sdf<D>* field = nullptr;
  const geo::MeshBoundarySdf<D>* mesh = nullptr;
  int dof_offset = 0;
};

//! Value plus the gradient with respect to the concatenated nodal
//! displacements of both sides, for the overlap max(g_a, g_b). At each
//! crossing the active side (ties to side a) provides both the spatial
//! gradient and the sparse displacement jacobian.
template <int D>
VolumeEstimate estimate_gradient(const FiberBatch<D>& batch,
                                 const GradientSide<D>& a,
                                 const GradientSide<D>& b, int total_dofs,
                                 const CrossingOptions& opts = {}) {
  const auto field = [&](const Vec<D>& x) {
    return std::max(a.field->value(x), b.field->value(x));
  };
  const double weight =
      batch.domain.measure() / static_cast<double>(std::max<std::int64_t>(
                                   1, batch.size()));
  const double denom_floor = opts.eps_tangent_rel * batch.length;
  VolumeEstimate est = detail::sweep(
      batch, field, opts,
      [&, jac = std::vector<typename geo::MeshBoundarySdf<D>::JacobianEntry>{}](
          const Fiber<D>& f, double h, double sigma,
          VolumeEstimate& est) mutable {
        const Vec<D> dir = f.end - f.start;
        const Vec<D> alpha = f.start + h * dir;
        const GradientSide<D>& side =
            a.field->value(alpha) >= b.field->value(alpha) ? a : b;
        const double denom = side.field->gradient(alpha).dot(dir);
        if (std::abs(denom) < denom_floor) {
          est.diag.dropped_tangent += 1;
          return;
        }
        if (side.mesh == nullptr) return;  // rigid side: no dofs
        if (est.nodal_gradient.size() != total_dofs)
          est.nodal_gradient = VecX::Zero(total_dofs);
        side.mesh->nodal_jacobian(alpha, jac);
        const double scale = -weight * sigma / denom;
        for (const auto& entry : jac)
          for (int k = 0; k < D; ++k)
            est.nodal_gradient[side.dof_offset + D * entry.node + k] +=
                scale * entry.dphi_dd[k];
      });
  if (est.nodal_gradient.size() != total_dofs)
    est.nodal_gradient = VecX::Zero(total_dofs);
  return est;
}

}  // namespace fcm::fmc
