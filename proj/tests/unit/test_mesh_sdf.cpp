#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcm/geometry/mesh_boundary.hpp"
#include "fcm/harness/generators.hpp"
#include "fcm/rng.hpp"
#include "reference_checks.hpp"

using namespace fcm;
using namespace fcm::geo;
using fcm::harness::box_tet_3d;
using fcm::harness::rect_block_2d;
using fcm::harness::uniform_coords;

namespace {

fem::Mesh2 unit_square(int n, fem::ElemType t = fem::ElemType::Quad4) {
  return rect_block_2d(uniform_coords(0, 1, n), uniform_coords(0, 1, n), t);
}

}  // namespace

TEST_CASE("undeformed unit square: centroid and boundary values") {
  const fem::Mesh2 mesh = unit_square(4);
  const MeshBoundarySdf<2> sdf(mesh, VecX::Zero(mesh.n_dofs()));
  CHECK(sdf.value(Vec2(0.5, 0.5)) == doctest::Approx(-0.5));
  for (const auto& f : mesh.facets)
    for (int k = 0; k < 2; ++k)
      CHECK(std::abs(sdf.value(mesh.nodes[f[k]])) < 1e-14);
  CHECK(sdf.value(Vec2(2.0, 0.5)) == doctest::Approx(1.0));
  CHECK(sdf.value(Vec2(0.5, -0.25)) == doctest::Approx(0.25));
}

TEST_CASE("rigid translation identity at 100 sampled points") {
  const fem::Mesh2 mesh = unit_square(5, fem::ElemType::Tri3);
  const VecX d0 = VecX::Zero(mesh.n_dofs());
  const Vec2 t(1.0, 2.0);  // dyadic shift: arithmetic is exact
  VecX dt(mesh.n_dofs());
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    dt[2 * n] = t.x();
    dt[2 * n + 1] = t.y();
  }
  const MeshBoundarySdf<2> ref(mesh, d0);
  const MeshBoundarySdf<2> moved(mesh, dt);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Vec2 x(rng.uniform(-1, 2), rng.uniform(-1, 2));
    CHECK(std::abs(moved.value(x + t) - ref.value(x)) < 1e-12);
  }
}

TEST_CASE("sign convention matches winding classification, 2D deformed") {
  const fem::Mesh2 mesh = unit_square(6, fem::ElemType::Tri3);
  // A smooth non-rigid deformation.
  VecX d(mesh.n_dofs());
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const Vec2 X = mesh.nodes[n];
    d[2 * n] = 0.08 * std::sin(2.1 * X.y()) + 0.03 * X.x() * X.y();
    d[2 * n + 1] = -0.06 * X.x() * X.x() + 0.05 * std::cos(1.7 * X.x());
  }
  const MeshBoundarySdf<2> sdf(mesh, d);
  Rng rng(9);
  int agreements = 0, total = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 x(rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5));
    const double v = sdf.value(x);
    if (std::abs(v) < 1e-10) continue;
    ++total;
    agreements += (v < 0.0) == refcheck::inside_boundary_2d(mesh, d, x);
  }
  CHECK(agreements == total);
}

TEST_CASE("sign convention matches solid-angle classification, 3D") {
  const fem::Mesh3 mesh = box_tet_3d(uniform_coords(0, 1, 3),
                                     uniform_coords(0, 1, 3),
                                     uniform_coords(0, 1, 3));
  VecX d(mesh.n_dofs());
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const Vec3 X = mesh.nodes[n];
    d[3 * n] = 0.05 * std::sin(X.y() + X.z());
    d[3 * n + 1] = 0.04 * X.x() * X.z();
    d[3 * n + 2] = -0.05 * X.x() + 0.02 * X.y() * X.y();
  }
  const MeshBoundarySdf<3> sdf(mesh, d);
  Rng rng(13);
  int agreements = 0, total = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x(rng.uniform(-0.4, 1.4), rng.uniform(-0.4, 1.4),
                 rng.uniform(-0.4, 1.4));
    const double v = sdf.value(x);
    if (std::abs(v) < 1e-10) continue;
    ++total;
    agreements += (v < 0.0) == refcheck::inside_boundary_3d(mesh, d, x);
  }
  CHECK(agreements == total);
}

TEST_CASE("spatial gradient matches central differences at interior points") {
  const fem::Mesh2 mesh = unit_square(6, fem::ElemType::Tri3);
  const VecX d = VecX::Zero(mesh.n_dofs());
  const MeshBoundarySdf<2> sdf(mesh, d);
  Rng rng(21);
  const double h = 1e-7;
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const Vec2 x(rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95));
    // Skip the medial axis (diagonals / center band) where the nearest
    // facet switches.
    const double dx = std::min(x.x(), 1 - x.x());
    const double dy = std::min(x.y(), 1 - x.y());
    if (std::abs(dx - dy) < 1e-3) continue;
    Vec2 g_fd;
    for (int k = 0; k < 2; ++k) {
      Vec2 xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      g_fd[k] = (sdf.value(xp) - sdf.value(xm)) / (2 * h);
    }
    CHECK((sdf.gradient(x) - g_fd).norm() < 1e-6);
    ++checked;
  }
  CHECK(checked > 300);
}

TEST_CASE("nodal jacobian: locality, translation identity, FD agreement") {
  const fem::Mesh2 mesh = unit_square(5, fem::ElemType::Tri3);
  VecX d(mesh.n_dofs());
  Rng rng(33);
  for (int i = 0; i < d.size(); ++i) d[i] = 0.02 * rng.uniform(-1, 1);
  const MeshBoundarySdf<2> sdf(mesh, d);

  std::vector<MeshBoundarySdf<2>::JacobianEntry> jac;
  int fd_checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Vec2 x(rng.uniform(-0.3, 1.3), rng.uniform(-0.3, 1.3));
    if (std::abs(sdf.value(x)) < 1e-6) continue;
    const auto near = sdf.nearest(x);
    sdf.nodal_jacobian(x, jac);

    // Locality: nonzeros only on nodes of the nearest facet.
    CHECK(jac.size() <= 2);
    for (const auto& e : jac) {
      const auto& f = mesh.facets[near.facet];
      CHECK((e.node == f[0] || e.node == f[1]));
    }

    // Translating all nodes equals translating the query oppositely.
    Vec2 sum = Vec2::Zero();
    for (const auto& e : jac) sum += e.dphi_dd;
    CHECK((sum + sdf.gradient(x)).norm() < 1e-10);

    // Finite differences through the displacement vector. Points whose
    // nearest feature is a vertex or near a facet switch are skipped: the
    // jacobian is one-sided there.
    if (near.w[0] < 1e-3 || near.w[1] < 1e-3) continue;
    const double h = 1e-6;
    bool smooth = true;
    std::vector<std::pair<int, double>> fd;
    for (const auto& e : jac) {
      for (int k = 0; k < 2; ++k) {
        VecX dp = d, dm = d;
        dp[2 * e.node + k] += h;
        dm[2 * e.node + k] -= h;
        const MeshBoundarySdf<2> sp(mesh, dp), sm(mesh, dm);
        const auto np = sp.nearest(x), nm = sm.nearest(x);
        if (np.facet != near.facet || nm.facet != near.facet) {
          smooth = false;
          break;
        }
        fd.emplace_back(k, (sp.value(x) - sm.value(x)) / (2 * h));
      }
      if (!smooth) break;
    }
    if (!smooth) continue;
    std::size_t idx = 0;
    for (const auto& e : jac)
      for (int k = 0; k < 2; ++k) {
        const double analytic = e.dphi_dd[k];
        const double approx = fd[idx++].second;
        CHECK(std::abs(analytic - approx) <
              1e-6 * std::max(1.0, std::abs(analytic)));
      }
    ++fd_checked;
  }
  CHECK(fd_checked > 20);
}

TEST_CASE("3d nodal jacobian translation identity") {
  const fem::Mesh3 mesh = box_tet_3d(uniform_coords(0, 1, 2),
                                     uniform_coords(0, 1, 2),
                                     uniform_coords(0, 1, 2));
  const VecX d = VecX::Zero(mesh.n_dofs());
  const MeshBoundarySdf<3> sdf(mesh, d);
  std::vector<MeshBoundarySdf<3>::JacobianEntry> jac;
  Rng rng(51);
  for (int i = 0; i < 50; ++i) {
    const Vec3 x(rng.uniform(-0.3, 1.3), rng.uniform(-0.3, 1.3),
                 rng.uniform(-0.3, 1.3));
    if (std::abs(sdf.value(x)) < 1e-6) continue;
    sdf.nodal_jacobian(x, jac);
    CHECK(jac.size() <= 3);
    Vec3 sum = Vec3::Zero();
    for (const auto& e : jac) sum += e.dphi_dd;
    CHECK((sum + sdf.gradient(x)).norm() < 1e-10);
  }
}

TEST_CASE("inverted deformation is rejected") {
  const fem::Mesh2 mesh = unit_square(2);
  VecX d = VecX::Zero(mesh.n_dofs());
  // Collapse the right edge past the left edge.
  for (int n = 0; n < mesh.n_nodes(); ++n)
    if (mesh.nodes[n].x() > 0.99) d[2 * n] = -2.0;
  CHECK_THROWS_AS(MeshBoundarySdf<2>(mesh, d), SolverError);
}

TEST_CASE("displacement size mismatch is rejected") {
  const fem::Mesh2 mesh = unit_square(2);
  CHECK_THROWS_AS(MeshBoundarySdf<2>(mesh, VecX::Zero(3)), ConfigError);
}
