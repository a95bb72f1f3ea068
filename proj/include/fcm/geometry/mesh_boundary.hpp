#pragma once

#include <vector>

#include "fcm/fem/mesh.hpp"
#include "fcm/geometry/sdf.hpp"

namespace fcm::geo {

//! Signed distance to the boundary of a deformed finite element body.
//!
//! The field is an immutable snapshot of (mesh, nodal displacement): facet
//! vertex positions, outward normals and angle-weighted pseudonormals are
//! precomputed, and a uniform grid over facet bounding boxes accelerates
//! nearest-facet queries. Safe to query concurrently.
//!
//! Sign is decided by the pseudonormal of the nearest feature (facet
//! interior, edge, or vertex), which is exact for watertight boundaries.
//! Nearest-facet ties resolve to the lowest facet index; those loci are
//! non-smooth and measure-zero under randomized sampling.
template <int D>
class MeshBoundarySdf final : public Sdf<D> {
 public:
  //! Builds the snapshot; throws SolverError if the displaced mesh has
  //! inverted elements (the sign test would be inconsistent). `origin`
  //! shifts the evaluation frame: queries are in coordinates relative to
  //! it. Anchoring at a frame-covariant corner keeps evaluations
  //! bit-identical under rigid frame translations of exactly representable
  //! data.
  MeshBoundarySdf(const fem::Mesh<D>& mesh, const VecX& displacement,
                  const Vec<D>& origin = Vec<D>::Zero());

  double value(const Vec<D>& x) const override;
  Vec<D> gradient(const Vec<D>& x) const override;
  Box<D> bounding_box() const override { return bbox_; }

  struct Nearest {
    int facet = -1;
    double dist = 0.0;
    double sign = 1.0;          // +1 outside, -1 inside
    Vec<D> closest;             // closest boundary point
    Vec<D> feature_normal;      // outward pseudonormal of nearest feature
    double w[D];                // facet vertex weights of the closest point
  };
  Nearest nearest(const Vec<D>& x) const;

  //! d(phi)/d(displacement of one facet node); only nodes of the nearest
  //! facet carry nonzero rows.
  struct JacobianEntry {
    int node;
    Vec<D> dphi_dd;
  };
  void nodal_jacobian(const Vec<D>& x, std::vector<JacobianEntry>& out) const;

  double mean_facet_diameter() const { return mean_diam_; }
  int n_facets() const { return static_cast<int>(facets_.size()); }
  const fem::Mesh<D>& mesh() const { return *mesh_; }

 private:
  struct FacetData {
    Vec<D> p[D];         // deformed vertex positions
    Vec<D> normal;       // unit outward facet normal
    Vec<D> vnormal[D];   // vertex pseudonormals
    Vec<D> enormal[D];   // 3D only: pseudonormal of edge opposite vertex k
    int node[D];         // mesh node ids
  };

  void build_grid();
  void scan_cell(const Vec<D>& x, int cell, double& best2, int& best) const;
  int cell_index(const Eigen::Array<int, D, 1>& c) const;

  const fem::Mesh<D>* mesh_;
  std::vector<FacetData> facets_;
  Box<D> bbox_;
  double mean_diam_ = 0.0;
  double degenerate_tol_ = 0.0;

  // Uniform grid (CSR layout).
  Vec<D> grid_origin_;
  double cell_size_ = 1.0;
  Eigen::Array<int, D, 1> dims_;
  std::vector<int> cell_start_;
  std::vector<int> cell_items_;
};

//! Builds the boundary field of the deformed configuration x = X + u.
template <int D>
MeshBoundarySdf<D> deformed_boundary_sdf(const fem::Mesh<D>& mesh,
                                         const VecX& displacement) {
  return MeshBoundarySdf<D>(mesh, displacement);
}

}  // namespace fcm::geo
