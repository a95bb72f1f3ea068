#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcm/contact/contact.hpp"
#include "fcm/harness/generators.hpp"
#include "fcm/rng.hpp"
#include "reference_checks.hpp"

using namespace fcm;
using namespace fcm::contact;
using fcm::harness::rect_block_2d;
using fcm::harness::uniform_coords;

namespace {

// Unit squares meshed on a 1/8 grid: coordinates are dyadic, so rigid
// integer translations stay exactly representable.
fem::Mesh2 unit_square_at(double x0, double y0) {
  return rect_block_2d(uniform_coords(x0, x0 + 1.0, 8),
                       uniform_coords(y0, y0 + 1.0, 8),
                       fem::ElemType::Quad4);
}

ContactParams base_params(std::int64_t fibers = 100000) {
  ContactParams p;
  p.k = 2.0;
  p.m = 1.0;
  p.fibers = fibers;
  p.fiber_length = 0.25;
  return p;
}

}  // namespace

TEST_CASE("contact energy power law") {
  ContactParams p;
  p.k = 2.0;
  p.m = 1.0;
  CHECK(contact_energy(0.0, p) == 0.0);
  CHECK(contact_energy(0.5, p) == doctest::Approx(1.0));
  p.k = 1.0;
  p.m = 2.0;
  CHECK(contact_energy(3.0, p) == doctest::Approx(9.0));
  CHECK_THROWS_AS(contact_energy(-0.1, p), ConfigError);
  ContactParams bad;
  bad.m = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("separated bodies give exact zeros without sampling") {
  const fem::Mesh2 m1 = unit_square_at(0.0, 0.0);
  const fem::Mesh2 m2 = unit_square_at(3.0, 0.0);
  const VecX z1 = VecX::Zero(m1.n_dofs()), z2 = VecX::Zero(m2.n_dofs());
  const auto r = contact_forces<2>(m1, z1, m2, z2, base_params(), 7);
  CHECK(r.overlap_volume == 0.0);
  CHECK(r.f1.norm() == 0.0);
  CHECK(r.f2.norm() == 0.0);
  CHECK(r.fiber_count == 0);  // short-circuited
}

TEST_CASE("overlapping squares: signs, reciprocity, clipping oracle") {
  // Overlap band [0.75, 1] x [0, 1]: area 0.25, d(area)/d(shift of body 1
  // along +x) = band height = 1 exactly (rectangle clipping).
  const fem::Mesh2 m1 = unit_square_at(0.0, 0.0);
  const fem::Mesh2 m2 = unit_square_at(0.75, 0.0);
  const VecX z1 = VecX::Zero(m1.n_dofs()), z2 = VecX::Zero(m2.n_dofs());
  const ContactParams p = base_params();
  const auto r = contact_forces<2>(m1, z1, m2, z2, p, 11);

  CHECK(r.overlap_volume == doctest::Approx(0.25).epsilon(0.02));
  CHECK(r.energy == doctest::Approx(p.k * r.overlap_volume));

  Vec2 net1 = Vec2::Zero(), net2 = Vec2::Zero();
  for (int n = 0; n < m1.n_nodes(); ++n)
    net1 += Vec2(r.f1[2 * n], r.f1[2 * n + 1]);
  for (int n = 0; n < m2.n_nodes(); ++n)
    net2 += Vec2(r.f2[2 * n], r.f2[2 * n + 1]);

  // Bodies are pushed apart along x.
  CHECK(net1.x() < 0.0);
  CHECK(net2.x() > 0.0);
  // Net force magnitude = k * d(area)/d(translation) = k * 1.
  CHECK(std::abs(-net1.x() - p.k) / p.k < 0.03);
  CHECK(std::abs(net2.x() - p.k) / p.k < 0.03);
  // Reciprocity within estimator noise.
  const double fmax = std::max(net1.norm(), net2.norm());
  CHECK((net1 + net2).norm() <= 0.02 * fmax);
}

TEST_CASE("zero overlap but intersecting boxes still gives zero force") {
  // Touching squares: boxes intersect at a line, bodies do not overlap.
  const fem::Mesh2 m1 = unit_square_at(0.0, 0.0);
  const fem::Mesh2 m2 = unit_square_at(1.25, 0.0);
  const VecX z1 = VecX::Zero(m1.n_dofs()), z2 = VecX::Zero(m2.n_dofs());
  auto p = base_params(20000);
  const auto r = contact_forces<2>(m1, z1, m2, z2, p, 13);
  CHECK(r.overlap_volume == 0.0);
  CHECK(r.f1.norm() == 0.0);
  CHECK(r.f2.norm() == 0.0);
}

TEST_CASE("interior node rows are exactly zero") {
  const fem::Mesh2 m1 = unit_square_at(0.0, 0.0);
  const fem::Mesh2 m2 = unit_square_at(0.75, 0.0);
  const VecX z1 = VecX::Zero(m1.n_dofs()), z2 = VecX::Zero(m2.n_dofs());
  const auto r = contact_forces<2>(m1, z1, m2, z2, base_params(20000), 17);
  std::vector<bool> on_boundary(m1.n_nodes(), false);
  for (const auto& f : m1.facets) on_boundary[f[0]] = on_boundary[f[1]] = true;
  for (int n = 0; n < m1.n_nodes(); ++n) {
    if (on_boundary[n]) continue;
    CHECK(r.f1[2 * n] == 0.0);
    CHECK(r.f1[2 * n + 1] == 0.0);
  }
}

TEST_CASE("doubling k doubles every force entry exactly (m = 1)") {
  const fem::Mesh2 m1 = unit_square_at(0.0, 0.0);
  const fem::Mesh2 m2 = unit_square_at(0.75, 0.0);
  const VecX z1 = VecX::Zero(m1.n_dofs()), z2 = VecX::Zero(m2.n_dofs());
  auto p1 = base_params(20000);
  auto p2 = p1;
  p2.k = 2.0 * p1.k;
  const auto ra = contact_forces<2>(m1, z1, m2, z2, p1, 19);
  const auto rb = contact_forces<2>(m1, z1, m2, z2, p2, 19);
  for (int i = 0; i < ra.f1.size(); ++i) CHECK(rb.f1[i] == 2.0 * ra.f1[i]);
  for (int i = 0; i < ra.f2.size(); ++i) CHECK(rb.f2[i] == 2.0 * ra.f2[i]);
}

TEST_CASE("rigid frame translation leaves forces unchanged bit-for-bit") {
  const fem::Mesh2 m1 = unit_square_at(0.0, 0.0);
  const fem::Mesh2 m2 = unit_square_at(0.75, 0.0);
  VecX z1 = VecX::Zero(m1.n_dofs()), z2 = VecX::Zero(m2.n_dofs());
  const auto base = contact_forces<2>(m1, z1, m2, z2, base_params(20000), 23);

  // Integer translation keeps the dyadic node coordinates exact.
  VecX t1 = z1, t2 = z2;
  for (int n = 0; n < m1.n_nodes(); ++n) {
    t1[2 * n] += 3.0;
    t1[2 * n + 1] += 2.0;
  }
  for (int n = 0; n < m2.n_nodes(); ++n) {
    t2[2 * n] += 3.0;
    t2[2 * n + 1] += 2.0;
  }
  const auto moved = contact_forces<2>(m1, t1, m2, t2, base_params(20000), 23);
  CHECK(moved.overlap_volume == base.overlap_volume);
  for (int i = 0; i < base.f1.size(); ++i) CHECK(moved.f1[i] == base.f1[i]);
  for (int i = 0; i < base.f2.size(); ++i) CHECK(moved.f2[i] == base.f2[i]);
}

TEST_CASE("forces match frozen-seed finite differences of the energy") {
  const fem::Mesh2 m1 = unit_square_at(0.0, 0.0);
  const fem::Mesh2 m2 = unit_square_at(0.75, 0.0);
  VecX d1 = VecX::Zero(m1.n_dofs()), d2 = VecX::Zero(m2.n_dofs());
  // Generic base state: keeps the bounding boxes away from the sampling
  // domain's snap lines, so tiny perturbations reuse the same batch.
  for (int n = 0; n < m1.n_nodes(); ++n) {
    d1[2 * n] += 0.01300717;
    d1[2 * n + 1] += 0.00710031;
  }
  auto p = base_params(20000);
  p.m = 1.0;
  const std::uint64_t seed = 29;
  const auto r = contact_forces<2>(m1, d1, m2, d2, p, seed);

  std::vector<int> boundary_dofs;
  for (const auto& f : m1.facets)
    for (int k = 0; k < 2; ++k) {
      boundary_dofs.push_back(2 * f[k]);
      boundary_dofs.push_back(2 * f[k] + 1);
    }
  std::sort(boundary_dofs.begin(), boundary_dofs.end());
  boundary_dofs.erase(std::unique(boundary_dofs.begin(), boundary_dofs.end()),
                      boundary_dofs.end());

  Rng rng(31);
  const double h = 1e-6;
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 20; ++trial) {
    const int dof =
        boundary_dofs[rng.next_u64() % boundary_dofs.size()];
    VecX dp = d1, dm = d1;
    dp[dof] += h;
    dm[dof] -= h;
    const auto rp = contact_forces<2>(m1, dp, m2, d2, p, seed);
    const auto rm = contact_forces<2>(m1, dm, m2, d2, p, seed);
    const double fd = -(rp.energy - rm.energy) / (2 * h);
    if (std::abs(r.f1[dof]) < 1e-12 && std::abs(fd) < 1e-12) continue;
    CHECK(std::abs(r.f1[dof] - fd) <=
          1e-5 * std::max(1.0, std::abs(r.f1[dof])));
    ++checked;
  }
  CHECK(checked >= 15);
}

TEST_CASE("mesh body against a rigid half-space") {
  const fem::Mesh2 m1 = unit_square_at(0.0, 0.0);
  VecX d1 = VecX::Zero(m1.n_dofs());
  // Push the square down so it penetrates the floor y <= 0 by 1/8.
  for (int n = 0; n < m1.n_nodes(); ++n) d1[2 * n + 1] -= 0.125;
  const geo::HalfSpaceSdf<2> floor2(Vec2(0, 1), 0.0);  // inside is y <= 0
  auto p = base_params(50000);
  const auto r = contact_forces<2>(m1, d1, floor2, p, 37);
  // Overlap is a 1 x 1/8 band.
  CHECK(r.overlap_volume == doctest::Approx(0.125).epsilon(0.03));
  Vec2 net = Vec2::Zero();
  for (int n = 0; n < m1.n_nodes(); ++n)
    net += Vec2(r.f1[2 * n], r.f1[2 * n + 1]);
  // Pushed back up; d(volume)/d(vertical shift) = width = 1.
  CHECK(net.y() > 0.0);
  CHECK(std::abs(net.y() - p.k) / p.k < 0.03);
  CHECK(std::abs(net.x()) < 0.05 * net.y());
}

TEST_CASE("m = 2 force scale follows the chain rule") {
  const fem::Mesh2 m1 = unit_square_at(0.0, 0.0);
  const fem::Mesh2 m2 = unit_square_at(0.75, 0.0);
  const VecX z1 = VecX::Zero(m1.n_dofs()), z2 = VecX::Zero(m2.n_dofs());
  auto p1 = base_params(20000);
  auto p2 = p1;
  p2.m = 2.0;
  const auto ra = contact_forces<2>(m1, z1, m2, z2, p1, 41);
  const auto rb = contact_forces<2>(m1, z1, m2, z2, p2, 41);
  // Same batch: f(m=2) = 2 Vc * f(m=1) entrywise.
  const double factor = 2.0 * ra.overlap_volume;
  for (int i = 0; i < ra.f1.size(); ++i)
    CHECK(rb.f1[i] == doctest::Approx(factor * ra.f1[i]).epsilon(1e-12));
}
