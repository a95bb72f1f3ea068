#include "fcm/fem/assembly.hpp"

#include <Eigen/Dense>

#include <set>
#include <vector>

namespace fcm::fem {

namespace {

// ---------------------------------------------------------------------------
// Element quadrature: one point for tri3/tet4, 2x2 Gauss for quad4.
// The callback receives (N, gradX, w_detJ) per quadrature point.
// ---------------------------------------------------------------------------

template <int D, int NPE, class Fn>
void run_qps(const Mesh<D>& mesh, int e,
             const Eigen::Matrix<double, NPE, D>& dNdXi_const, double w_ref,
             const Fn& fn) {
  Eigen::Matrix<double, NPE, D> X;
  for (int a = 0; a < NPE; ++a) X.row(a) = mesh.nodes[mesh.node_of(e, a)];
  const Eigen::Matrix<double, D, D> J = X.transpose() * dNdXi_const;
  const double detJ = J.determinant();
  if (!(detJ > 0.0))
    throw SolverError("element " + std::to_string(e) +
                      " has non-positive reference jacobian");
  const Eigen::Matrix<double, NPE, D> gradX = dNdXi_const * J.inverse();
  Eigen::Matrix<double, NPE, 1> N;
  if constexpr (NPE == 3)
    N << 1.0 / 3, 1.0 / 3, 1.0 / 3;
  else
    N << 0.25, 0.25, 0.25, 0.25;
  fn(N, gradX, w_ref * detJ);
}

template <int D, class Fn>
void for_each_qp(const Mesh<D>& mesh, int e, const Fn& fn) {
  if constexpr (D == 2) {
    if (mesh.etype == ElemType::Tri3) {
      Eigen::Matrix<double, 3, 2> dN;
      dN << -1, -1, 1, 0, 0, 1;
      run_qps<2, 3>(mesh, e, dN, 0.5, fn);
      return;
    }
    // Quad4, 2x2 Gauss.
    Eigen::Matrix<double, 4, 2> X;
    for (int a = 0; a < 4; ++a) X.row(a) = mesh.nodes[mesh.node_of(e, a)];
    static const double gp = 1.0 / std::sqrt(3.0);
    static const double xi_a[4] = {-1, 1, 1, -1};
    static const double eta_a[4] = {-1, -1, 1, 1};
    for (int qx = 0; qx < 2; ++qx) {
      for (int qy = 0; qy < 2; ++qy) {
        const double xi = qx == 0 ? -gp : gp;
        const double eta = qy == 0 ? -gp : gp;
        Eigen::Matrix<double, 4, 1> N;
        Eigen::Matrix<double, 4, 2> dN;
        for (int a = 0; a < 4; ++a) {
          N[a] = 0.25 * (1 + xi * xi_a[a]) * (1 + eta * eta_a[a]);
          dN(a, 0) = 0.25 * xi_a[a] * (1 + eta * eta_a[a]);
          dN(a, 1) = 0.25 * eta_a[a] * (1 + xi * xi_a[a]);
        }
        const Eigen::Matrix2d J = X.transpose() * dN;
        const double detJ = J.determinant();
        if (!(detJ > 0.0))
          throw SolverError("element " + std::to_string(e) +
                            " has non-positive reference jacobian");
        const Eigen::Matrix<double, 4, 2> gradX = dN * J.inverse();
        fn(N, gradX, detJ);
      }
    }
  } else {
    Eigen::Matrix<double, 4, 3> dN;
    dN << -1, -1, -1, 1, 0, 0, 0, 1, 0, 0, 0, 1;
    run_qps<3, 4>(mesh, e, dN, 1.0 / 6.0, fn);
  }
}

// ---------------------------------------------------------------------------
// Constitutive kernels (3x3 embedding; F(2,2)=1 under plane strain).
// ---------------------------------------------------------------------------

template <int D, int NPE>
Eigen::Matrix<double, D, D> disp_gradient(
    const Mesh<D>& mesh, int e, const VecX& d,
    const Eigen::Matrix<double, NPE, D>& gradX) {
  Eigen::Matrix<double, D, D> H = Eigen::Matrix<double, D, D>::Zero();
  for (int a = 0; a < NPE; ++a) {
    const int n = mesh.node_of(e, a);
    for (int i = 0; i < D; ++i)
      for (int k = 0; k < D; ++k) H(i, k) += d[Mesh<D>::dof(n, i)] * gradX(a, k);
  }
  return H;
}

struct NeoHookeanState {
  Mat3 F = Mat3::Identity();
  Mat3 FinvT = Mat3::Identity();
  double J = 1.0;
  double I1 = 3.0;
  double a = 1.0;  // J^(-2/3)
};

template <int D>
NeoHookeanState nh_state(const Eigen::Matrix<double, D, D>& H, int elem) {
  NeoHookeanState s;
  s.F.topLeftCorner<D, D>() += H;
  s.J = s.F.determinant();
  if (!(s.J > 0.0))
    throw SolverError("element " + std::to_string(elem) +
                      " inverted (det F <= 0)");
  s.FinvT = s.F.inverse().transpose();
  s.I1 = (s.F.transpose() * s.F).trace();
  s.a = std::pow(s.J, -2.0 / 3.0);
  return s;
}

Mat3 nh_piola(const NeoHookeanState& s, double G, double K) {
  return G * s.a * (s.F - (s.I1 / 3.0) * s.FinvT) +
         K * (s.J - 1.0) * s.J * s.FinvT;
}

//! d(P)/d(F) for the Neo-Hookean law; major-symmetric.
void nh_tangent(const NeoHookeanState& s, double G, double K,
                double A[3][3][3][3]) {
  const Mat3& F = s.F;
  const Mat3& Ft = s.FinvT;
  const double a = s.a, I1 = s.I1, J = s.J;
  for (int i = 0; i < 3; ++i)
    for (int Jj = 0; Jj < 3; ++Jj)
      for (int k = 0; k < 3; ++k)
        for (int L = 0; L < 3; ++L) {
          double v = 0.0;
          if (i == k && Jj == L) v += G * a;
          v += -(2.0 / 3.0) * G * a *
               (F(i, Jj) * Ft(k, L) + Ft(i, Jj) * F(k, L));
          v += (2.0 / 9.0) * G * a * I1 * Ft(i, Jj) * Ft(k, L);
          v += (1.0 / 3.0) * G * a * I1 * Ft(k, Jj) * Ft(i, L);
          v += K * (2.0 * J - 1.0) * J * Ft(i, Jj) * Ft(k, L);
          v += -K * (J * J - J) * Ft(k, Jj) * Ft(i, L);
          A[i][Jj][k][L] = v;
        }
}

}  // namespace

// ---------------------------------------------------------------------------

template <int D>
VecX internal_force(const Mesh<D>& mesh, const Material& mat, const VecX& d) {
  if (d.size() != mesh.n_dofs())
    throw ConfigError("displacement size mismatch");
  VecX f = VecX::Zero(mesh.n_dofs());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    for_each_qp(mesh, e, [&](const auto& /*N*/, const auto& gradX, double dV) {
      constexpr int NPE = std::remove_reference_t<decltype(gradX)>::RowsAtCompileTime;
      const Eigen::Matrix<double, D, D> H =
          disp_gradient<D, NPE>(mesh, e, d, gradX);
      Eigen::Matrix<double, D, D> P;
      if (mat.law == Material::Law::LinearElastic) {
        const Eigen::Matrix<double, D, D> eps = 0.5 * (H + H.transpose());
        P = mat.lambda * eps.trace() *
                Eigen::Matrix<double, D, D>::Identity() +
            2.0 * mat.mu * eps;
      } else {
        const NeoHookeanState s = nh_state<D>(H, e);
        P = nh_piola(s, mat.G, mat.K).template topLeftCorner<D, D>();
      }
      for (int a = 0; a < NPE; ++a) {
        const int n = mesh.node_of(e, a);
        for (int i = 0; i < D; ++i) {
          double v = 0.0;
          for (int k = 0; k < D; ++k) v += P(i, k) * gradX(a, k);
          f[Mesh<D>::dof(n, i)] += v * dV;
        }
      }
    });
  }
  return f;
}

template <int D>
SpMat tangent_stiffness(const Mesh<D>& mesh, const Material& mat,
                        const VecX& d) {
  if (d.size() != mesh.n_dofs())
    throw ConfigError("displacement size mismatch");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.n_elems()) * mesh.npe() *
                mesh.npe() * D * D);
  for (int e = 0; e < mesh.n_elems(); ++e) {
    for_each_qp(mesh, e, [&](const auto& /*N*/, const auto& gradX, double dV) {
      constexpr int NPE = std::remove_reference_t<decltype(gradX)>::RowsAtCompileTime;
      double A[3][3][3][3];
      bool linear = mat.law == Material::Law::LinearElastic;
      if (!linear) {
        const Eigen::Matrix<double, D, D> H =
            disp_gradient<D, NPE>(mesh, e, d, gradX);
        nh_tangent(nh_state<D>(H, e), mat.G, mat.K, A);
      }
      for (int a = 0; a < NPE; ++a) {
        const int na = mesh.node_of(e, a);
        for (int b = 0; b < NPE; ++b) {
          const int nb = mesh.node_of(e, b);
          for (int i = 0; i < D; ++i)
            for (int k = 0; k < D; ++k) {
              double v = 0.0;
              if (linear) {
                v = mat.lambda * gradX(a, i) * gradX(b, k) +
                    mat.mu * gradX(a, k) * gradX(b, i);
                if (i == k) v += mat.mu * gradX.row(a).dot(gradX.row(b));
              } else {
                for (int Jj = 0; Jj < D; ++Jj)
                  for (int L = 0; L < D; ++L)
                    v += gradX(a, Jj) * A[i][Jj][k][L] * gradX(b, L);
              }
              trips.emplace_back(Mesh<D>::dof(na, i), Mesh<D>::dof(nb, k),
                                 v * dV);
            }
        }
      }
    });
  }
  SpMat Kmat(mesh.n_dofs(), mesh.n_dofs());
  Kmat.setFromTriplets(trips.begin(), trips.end());
  return Kmat;
}

template <int D>
VecX lumped_mass(const Mesh<D>& mesh, double rho0) {
  if (!(rho0 > 0.0)) throw ConfigError("rho0 must be positive");
  VecX m = VecX::Zero(mesh.n_dofs());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    for_each_qp(mesh, e, [&](const auto& N, const auto& gradX, double dV) {
      constexpr int NPE = std::remove_reference_t<decltype(gradX)>::RowsAtCompileTime;
      for (int a = 0; a < NPE; ++a) {
        const int n = mesh.node_of(e, a);
        for (int i = 0; i < D; ++i)
          m[Mesh<D>::dof(n, i)] += rho0 * N[a] * dV;
      }
    });
  }
  return m;
}

template <int D>
double strain_energy(const Mesh<D>& mesh, const Material& mat, const VecX& d) {
  double total = 0.0;
  for (int e = 0; e < mesh.n_elems(); ++e) {
    for_each_qp(mesh, e, [&](const auto& /*N*/, const auto& gradX, double dV) {
      constexpr int NPE = std::remove_reference_t<decltype(gradX)>::RowsAtCompileTime;
      const Eigen::Matrix<double, D, D> H =
          disp_gradient<D, NPE>(mesh, e, d, gradX);
      if (mat.law == Material::Law::LinearElastic) {
        const Eigen::Matrix<double, D, D> eps = 0.5 * (H + H.transpose());
        const double tr = eps.trace();
        total += (0.5 * mat.lambda * tr * tr + mat.mu * eps.squaredNorm()) * dV;
      } else {
        const NeoHookeanState s = nh_state<D>(H, e);
        total += (0.5 * mat.G * (s.a * s.I1 - 3.0) +
                  0.5 * mat.K * (s.J - 1.0) * (s.J - 1.0)) *
                 dV;
      }
    });
  }
  return total;
}

template <int D>
std::vector<ElementStress> recover_stress(const Mesh<D>& mesh,
                                          const Material& mat, const VecX& d) {
  std::vector<ElementStress> out(mesh.n_elems());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    Mat3 sigma = Mat3::Zero();
    double wsum = 0.0;
    for_each_qp(mesh, e, [&](const auto& /*N*/, const auto& gradX, double dV) {
      constexpr int NPE = std::remove_reference_t<decltype(gradX)>::RowsAtCompileTime;
      const Eigen::Matrix<double, D, D> H =
          disp_gradient<D, NPE>(mesh, e, d, gradX);
      Mat3 s3 = Mat3::Zero();
      if (mat.law == Material::Law::LinearElastic) {
        const Eigen::Matrix<double, D, D> eps = 0.5 * (H + H.transpose());
        s3.topLeftCorner<D, D>() =
            mat.lambda * eps.trace() *
                Eigen::Matrix<double, D, D>::Identity() +
            2.0 * mat.mu * eps;
        if constexpr (D == 2) s3(2, 2) = mat.lambda * eps.trace();
      } else {
        const NeoHookeanState st = nh_state<D>(H, e);
        s3 = (1.0 / st.J) * nh_piola(st, mat.G, mat.K) * st.F.transpose();
      }
      sigma += dV * s3;
      wsum += dV;
    });
    sigma /= wsum;
    ElementStress es;
    es.cauchy = sigma;
    const Mat3 dev = sigma - (sigma.trace() / 3.0) * Mat3::Identity();
    es.von_mises = std::sqrt(1.5 * dev.squaredNorm());
    out[e] = es;
  }
  return out;
}

template <int D>
VecX external_force(const Mesh<D>& mesh,
                    const std::vector<BoundaryCondition>& bcs, double s) {
  VecX f = VecX::Zero(mesh.n_dofs());
  for (const auto& bc : bcs) {
    if (bc.kind == BoundaryCondition::Kind::Traction) {
      const Vec3 t = bc.schedule(s) * bc.vector;
      for (int fi : mesh.facet_set(bc.set)) {
        const auto& facet = mesh.facets[fi];
        const double share = mesh.facet_measure(facet) / D;
        for (int k = 0; k < D; ++k)
          for (int c = 0; c < D; ++c)
            f[Mesh<D>::dof(facet[k], c)] += share * t[c];
      }
    } else if (bc.kind == BoundaryCondition::Kind::BodyForce) {
      const Vec3 b = bc.schedule(s) * bc.vector;
      for (int e = 0; e < mesh.n_elems(); ++e) {
        for_each_qp(mesh, e, [&](const auto& N, const auto& gradX, double dV) {
          constexpr int NPE = std::remove_reference_t<decltype(gradX)>::RowsAtCompileTime;
          for (int a = 0; a < NPE; ++a)
            for (int c = 0; c < D; ++c)
              f[Mesh<D>::dof(mesh.node_of(e, a), c)] += N[a] * b[c] * dV;
        });
      }
    }
  }
  return f;
}

template <int D>
std::vector<DirichletEntry> dirichlet_at(const Mesh<D>& mesh,
                                         const std::vector<BoundaryCondition>& bcs,
                                         double s) {
  std::vector<DirichletEntry> entries;
  std::map<int, std::size_t> by_dof;
  for (const auto& bc : bcs) {
    if (bc.kind != BoundaryCondition::Kind::Dirichlet) continue;
    const double mult = bc.schedule(s);
    const double rate = bc.schedule.rate(s);
    for (int n : mesh.node_set(bc.set)) {
      for (int c = 0; c < D; ++c) {
        if (!bc.mask[c]) continue;
        const DirichletEntry entry{Mesh<D>::dof(n, c), mult * bc.vector[c],
                                   rate * bc.vector[c]};
        auto it = by_dof.find(entry.dof);
        if (it == by_dof.end()) {
          by_dof[entry.dof] = entries.size();
          entries.push_back(entry);
        } else {
          entries[it->second] = entry;
        }
      }
    }
  }
  return entries;
}

template <int D>
void validate_bcs(const Mesh<D>& mesh,
                  const std::vector<BoundaryCondition>& bcs) {
  std::array<std::set<int>, 3> constrained;
  for (const auto& bc : bcs) {
    if (bc.kind != BoundaryCondition::Kind::Dirichlet) continue;
    for (int n : mesh.node_set(bc.set))
      for (int c = 0; c < D; ++c)
        if (bc.mask[c]) constrained[c].insert(n);
  }
  for (const auto& bc : bcs) {
    if (bc.kind != BoundaryCondition::Kind::Traction) continue;
    for (int c = 0; c < D; ++c) {
      if (bc.vector[c] == 0.0) continue;
      for (int fi : mesh.facet_set(bc.set)) {
        bool all = true;
        for (int k = 0; k < D; ++k)
          all = all && constrained[c].count(mesh.facets[fi][k]) > 0;
        if (all)
          throw ConfigError(
              "traction facet set '" + bc.set +
              "' overlaps a Dirichlet-constrained region in component " +
              std::to_string(c));
      }
    }
  }
}

template <int D>
VecX assemble_residual(const Mesh<D>& mesh, const Material& mat, const VecX& d,
                       const VecX& accel,
                       const std::vector<BoundaryCondition>& bcs, double s,
                       const VecX& f_cont) {
  const VecX m = lumped_mass(mesh, mat.rho0);
  VecX r = internal_force(mesh, mat, d) - external_force(mesh, bcs, s);
  if (f_cont.size() == r.size()) r -= f_cont;
  r += m.cwiseProduct(accel);
  for (const auto& entry : dirichlet_at(mesh, bcs, s))
    r[entry.dof] = d[entry.dof] - entry.value;
  return r;
}

// Explicit instantiations.
template VecX internal_force<2>(const Mesh<2>&, const Material&, const VecX&);
template VecX internal_force<3>(const Mesh<3>&, const Material&, const VecX&);
template SpMat tangent_stiffness<2>(const Mesh<2>&, const Material&, const VecX&);
template SpMat tangent_stiffness<3>(const Mesh<3>&, const Material&, const VecX&);
template VecX lumped_mass<2>(const Mesh<2>&, double);
template VecX lumped_mass<3>(const Mesh<3>&, double);
template double strain_energy<2>(const Mesh<2>&, const Material&, const VecX&);
template double strain_energy<3>(const Mesh<3>&, const Material&, const VecX&);
template std::vector<ElementStress> recover_stress<2>(const Mesh<2>&,
                                                      const Material&,
                                                      const VecX&);
template std::vector<ElementStress> recover_stress<3>(const Mesh<3>&,
                                                      const Material&,
                                                      const VecX&);
template VecX external_force<2>(const Mesh<2>&,
                                const std::vector<BoundaryCondition>&, double);
template VecX external_force<3>(const Mesh<3>&,
                                const std::vector<BoundaryCondition>&, double);
template std::vector<DirichletEntry> dirichlet_at<2>(
    const Mesh<2>&, const std::vector<BoundaryCondition>&, double);
template std::vector<DirichletEntry> dirichlet_at<3>(
    const Mesh<3>&, const std::vector<BoundaryCondition>&, double);
template void validate_bcs<2>(const Mesh<2>&,
                              const std::vector<BoundaryCondition>&);
template void validate_bcs<3>(const Mesh<3>&,
                              const std::vector<BoundaryCondition>&);
template VecX assemble_residual<2>(const Mesh<2>&, const Material&, const VecX&,
                                   const VecX&,
                                   const std::vector<BoundaryCondition>&,
                                   double, const VecX&);
template VecX assemble_residual<3>(const Mesh<3>&, const Material&, const VecX&,
                                   const VecX&,
                                   const std::vector<BoundaryCondition>&,
                                   double, const VecX&);

}  // namespace fcm::fem
