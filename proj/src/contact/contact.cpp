#include "fcm/contact/contact.hpp"

namespace fcm::contact {

namespace {

template <int D>
Box<D> deformed_aabb(const fem::Mesh<D>& mesh, const VecX& d) {
  Box<D> b;
  for (int n = 0; n < mesh.n_nodes(); ++n) b.absorb(mesh.deformed_node(n, d));
  return b;
}

//! Per-axis overlap bound from one body's boundary: a ray along axis k
//! from any overlap point stays inside the other axes' candidate slab and
//! exits the body through a boundary facet meeting that slab, so the
//! facet extents along k bound the overlap along k.
template <int D>
void tighten_axis(const fem::Mesh<D>& mesh, const VecX& d, int axis,
                  const Box<D>& candidate, Box<D>& out) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& f : mesh.facets) {
    Box<D> fb;
    for (int k = 0; k < D; ++k) fb.absorb(mesh.deformed_node(f[k], d));
    bool in_slab = true;
    for (int j = 0; j < D && in_slab; ++j) {
      if (j == axis) continue;
      in_slab = fb.hi[j] >= candidate.lo[j] && fb.lo[j] <= candidate.hi[j];
    }
    if (!in_slab) continue;
    lo = std::min(lo, fb.lo[axis]);
    hi = std::max(hi, fb.hi[axis]);
  }
  out.lo[axis] = std::max(out.lo[axis], lo);
  out.hi[axis] = std::min(out.hi[axis], hi);
}

//! Largest power of two not exceeding x.
double pow2_floor(double x) { return std::exp2(std::floor(std::log2(x))); }

template <int D>
double mean_facet_diameter(const fem::Mesh<D>& mesh, const VecX& d) {
  double sum = 0.0;
  for (const auto& f : mesh.facets) {
    if constexpr (D == 2) {
      sum += (mesh.deformed_node(f[1], d) - mesh.deformed_node(f[0], d)).norm();
    } else {
      double m = 0.0;
      for (int k = 0; k < 3; ++k)
        m = std::max(m, (mesh.deformed_node(f[(k + 1) % 3], d) -
                         mesh.deformed_node(f[k], d))
                            .norm());
      sum += m;
    }
  }
  if (mesh.facets.empty())
    throw ConfigError("mesh boundary is empty; extract_boundary() first");
  return sum / static_cast<double>(mesh.facets.size());
}

//! Rigid field viewed from the local evaluation frame.
template <int D>
class ShiftedSdf final : public geo::Sdf<D> {
 public:
  ShiftedSdf(const geo::Sdf<D>& base, const Vec<D>& origin)
      : base_(&base), c0_(origin) {}
  double value(const Vec<D>& x) const override {
    return base_->value(x + c0_);
  }
  Vec<D> gradient(const Vec<D>& x) const override {
    return base_->gradient(x + c0_);
  }
  Box<D> bounding_box() const override {
    Box<D> b = base_->bounding_box();
    b.lo -= c0_;
    b.hi -= c0_;
    return b;
  }

 private:
  const geo::Sdf<D>* base_;
  Vec<D> c0_;
};

template <int D>
ContactForceResult run_pair(const fem::Mesh<D>& mesh1, const VecX& d1,
                            const fem::Mesh<D>* mesh2, const VecX* d2,
                            const geo::Sdf<D>* rigid,
                            const ContactParams& params, std::uint64_t seed) {
  params.validate();
  const int dofs1 = mesh1.n_dofs();
  const int dofs2 = mesh2 ? mesh2->n_dofs() : 0;

  ContactForceResult out;
  out.f1 = VecX::Zero(dofs1);
  out.f2 = VecX::Zero(dofs2);
  out.seed = seed;

  const Box<D> box1 = deformed_aabb(mesh1, d1);
  const Box<D> box2 =
      mesh2 ? deformed_aabb(*mesh2, *d2) : rigid->bounding_box();
  Box<D> common = Box<D>::intersect(box1, box2);
  if (common.empty()) return out;  // separated: exact zeros, no sampling

  // Tighten the candidate region around the true overlap axis by axis;
  // the rigid side contributes through its bounding box, already folded
  // into `common`. Two passes reach a near-fixpoint.
  for (int pass = 0; pass < 2; ++pass) {
    Box<D> refined = common;
    for (int axis = 0; axis < D; ++axis) {
      tighten_axis(mesh1, d1, axis, common, refined);
      if (mesh2) tighten_axis(*mesh2, *d2, axis, common, refined);
    }
    common = refined;
    if (common.empty()) return out;  // no boundary can reach the region
  }

  double length = params.fiber_length;
  if (length <= 0.0) {
    length = 2.0 * mean_facet_diameter(mesh1, d1);
    if (mesh2) length = std::max(length, 2.0 * mean_facet_diameter(*mesh2, *d2));
  }

  // Sampling domain: the common box inflated by one fiber length, snapped
  // outward to a dyadic grid so it is stable under small perturbations.
  const double q = pow2_floor(std::max(length / 4.0, 1e-12));
  Box<D> domain = common.inflated(length);
  for (int k = 0; k < D; ++k) {
    domain.lo[k] = std::floor(domain.lo[k] / q) * q;
    domain.hi[k] = std::ceil(domain.hi[k] / q) * q;
  }
  const Vec<D> c0 = domain.lo;
  Box<D> local;
  local.lo = Vec<D>::Zero();
  local.hi = domain.hi - domain.lo;

  const geo::MeshBoundarySdf<D> b1(mesh1, d1, c0);
  std::unique_ptr<geo::MeshBoundarySdf<D>> b2;
  std::unique_ptr<ShiftedSdf<D>> r2;
  const geo::Sdf<D>* side2 = nullptr;
  if (mesh2) {
    b2 = std::make_unique<geo::MeshBoundarySdf<D>>(*mesh2, *d2, c0);
    side2 = b2.get();
  } else {
    r2 = std::make_unique<ShiftedSdf<D>>(*rigid, c0);
    side2 = r2.get();
  }

  const fmc::FiberBatch<D> batch =
      fmc::sample_fibers(local, params.fibers, length, seed);
  out.fiber_count = batch.size();

  fmc::GradientSide<D> a{&b1, &b1, 0};
  fmc::GradientSide<D> b{side2, b2.get(), dofs1};
  const fmc::VolumeEstimate est = fmc::estimate_gradient(
      batch, a, b, dofs1 + dofs2, params.crossing_options());

  out.overlap_volume = est.value;
  out.energy = contact_energy(est.value, params);
  out.diag = est.diag;

  // F = -k m Vc^(m-1) dVc/dd; the m = 1 branch keeps zero-overlap exact.
  double scale;
  if (params.m == 1.0)
    scale = -params.k;
  else
    scale = -params.k * params.m *
            (est.value > 0.0 ? std::pow(est.value, params.m - 1.0) : 0.0);
  out.f1 = scale * est.nodal_gradient.head(dofs1);
  if (dofs2 > 0) out.f2 = scale * est.nodal_gradient.tail(dofs2);
  return out;
}

}  // namespace

template <int D>
ContactForceResult contact_forces(const fem::Mesh<D>& mesh1, const VecX& d1,
                                  const fem::Mesh<D>& mesh2, const VecX& d2,
                                  const ContactParams& params,
                                  std::uint64_t seed) {
  return run_pair<D>(mesh1, d1, &mesh2, &d2, nullptr, params, seed);
}

template <int D>
ContactForceResult contact_forces(const fem::Mesh<D>& mesh1, const VecX& d1,
                                  const geo::Sdf<D>& rigid,
                                  const ContactParams& params,
                                  std::uint64_t seed) {
  return run_pair<D>(mesh1, d1, nullptr, nullptr, &rigid, params, seed);
}

template ContactForceResult contact_forces<2>(const fem::Mesh<2>&, const VecX&,
                                              const fem::Mesh<2>&, const VecX&,
                                              const ContactParams&,
                                              std::uint64_t);
template ContactForceResult contact_forces<3>(const fem::Mesh<3>&, const VecX&,
                                              const fem::Mesh<3>&, const VecX&,
                                              const ContactParams&,
                                              std::uint64_t);
template ContactForceResult contact_forces<2>(const fem::Mesh<2>&, const VecX&,
                                              const geo::Sdf<2>&,
                                              const ContactParams&,
                                              std::uint64_t);
template ContactForceResult contact_forces<3>(const fem::Mesh<3>&, const VecX&,
                                              const geo::Sdf<3>&,
                                              const ContactParams&,
                                              std::uint64_t);

}  // namespace fcm::contact
