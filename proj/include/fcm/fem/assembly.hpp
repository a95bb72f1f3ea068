#pragma once

#include <Eigen/SparseCore>

#include "fcm/fem/bc.hpp"
#include "fcm/fem/material.hpp"
#include "fcm/fem/mesh.hpp"

namespace fcm::fem {

using SpMat = Eigen::SparseMatrix<double>;

//! Assembled internal force: for the Neo-Hookean law the first
//! Piola-Kirchhoff stress integrated against reference shape gradients,
//! for the linear law the small-strain stress. Quadrature: one point for
//! tri3/tet4, 2x2 for quad4; plane strain in 2D. Throws SolverError naming
//! the element if the deformation gradient determinant is non-positive.
template <int D>
VecX internal_force(const Mesh<D>& mesh, const Material& mat, const VecX& d);

//! Consistent tangent d(F_int)/d(d): material plus geometric parts for the
//! Neo-Hookean law; symmetric.
template <int D>
SpMat tangent_stiffness(const Mesh<D>& mesh, const Material& mat,
                        const VecX& d);

//! Row-sum lumped mass per dof (the same nodal mass for every component).
template <int D>
VecX lumped_mass(const Mesh<D>& mesh, double rho0);

//! Total strain energy at displacement d.
template <int D>
double strain_energy(const Mesh<D>& mesh, const Material& mat, const VecX& d);

//! Per-element Cauchy stress (3x3, plane-strain out-of-plane term included
//! in 2D) and the von Mises scalar.
struct ElementStress {
  Mat3 cauchy = Mat3::Zero();
  double von_mises = 0.0;
};

template <int D>
std::vector<ElementStress> recover_stress(const Mesh<D>& mesh,
                                          const Material& mat, const VecX& d);

//! External load vector at schedule parameter s: dead-load tractions over
//! reference facets plus body force per reference volume.
template <int D>
VecX external_force(const Mesh<D>& mesh,
                    const std::vector<BoundaryCondition>& bcs, double s);

//! Dynamic residual R = M.a + F_int(d) - F_ext(s) - F_cont, with Dirichlet
//! rows replaced by the constraint residual d - u(s).
template <int D>
VecX assemble_residual(const Mesh<D>& mesh, const Material& mat, const VecX& d,
                       const VecX& accel,
                       const std::vector<BoundaryCondition>& bcs, double s,
                       const VecX& f_cont);

}  // namespace fcm::fem
