#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcm/harness/generators.hpp"
#include "fcm/solvers/dynamics.hpp"
#include "fcm/solvers/statics.hpp"
#include "fcm/rng.hpp"

using namespace fcm;
using namespace fcm::solvers;
using fcm::harness::rect_block_2d;
using fcm::harness::uniform_coords;

namespace {

fem::Mesh2 square_mesh(double x0, double y0, double side, int n,
                       fem::ElemType t = fem::ElemType::Quad4) {
  return rect_block_2d(uniform_coords(x0, x0 + side, n),
                       uniform_coords(y0, y0 + side, n), t);
}

}  // namespace

TEST_CASE("cfl_dt") {
  const fem::Mesh2 mesh = square_mesh(0, 0, 1.0, 10);  // min edge 0.1
  const auto mat = fem::Material::linear_elastic(900.0, 0.0, 1.0);
  // c0 = sqrt(E / rho) = 30.
  CHECK(std::sqrt(mat.stiffness_modulus() / mat.rho0) == doctest::Approx(30.0));
  CHECK(cfl_dt(mesh, mat, 0.5) == doctest::Approx(0.1 * 0.5 / 30.0));
  CHECK(cfl_dt(mesh, mat, 0.5) == doctest::Approx(1.6667e-3).epsilon(1e-4));
  const fem::Mesh2 fine = square_mesh(0, 0, 1.0, 20);  // halved edge
  CHECK(cfl_dt(fine, mat, 0.5) == doctest::Approx(0.5 * cfl_dt(mesh, mat, 0.5)));
}

TEST_CASE("kdk free flight is exact per step") {
  KdkState st;
  st.d = VecX::Zero(2);
  st.v = VecX::Zero(2);
  st.v << 0.75, -0.25;
  st.a = VecX::Zero(2);
  const VecX mass = VecX::Constant(2, 1.5);
  const auto no_force = [](const VecX&, double) { return VecX::Zero(2); };
  for (int s = 1; s <= 10; ++s) {
    kdk_step(st, mass, 0.125, no_force);
    CHECK(st.d[0] == 0.75 * 0.125 * s);
    CHECK(st.d[1] == -0.25 * 0.125 * s);
  }
}

TEST_CASE("kdk harmonic oscillator: energy and second-order accuracy") {
  const auto spring = [](const VecX& d, double) { return VecX(-d); };
  const VecX mass = VecX::Ones(1);

  const auto run = [&](double dt) {
    KdkState st;
    st.d = VecX::Ones(1);
    st.v = VecX::Zero(1);
    st.a = VecX(-st.d);
    double max_drift = 0.0;
    const double e0 = 0.5 * (st.v[0] * st.v[0] + st.d[0] * st.d[0]);
    const auto steps = static_cast<std::int64_t>(std::llround(2 * kPi / dt));
    for (std::int64_t s = 0; s < steps; ++s) {
      kdk_step(st, mass, dt, spring);
      const double e = 0.5 * (st.v[0] * st.v[0] + st.d[0] * st.d[0]);
      max_drift = std::max(max_drift, std::abs(e - e0) / e0);
    }
    const double t = steps * dt;
    return std::make_pair(max_drift, std::abs(st.d[0] - std::cos(t)));
  };

  const auto [drift1, err1] = run(1e-3);
  CHECK(drift1 <= 1e-6);
  const auto [drift2, err2] = run(5e-4);
  CHECK(err1 / err2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("kdk time reversibility on a hyperelastic body") {
  const fem::Mesh2 mesh = square_mesh(0, 0, 1.0, 4, fem::ElemType::Tri3);
  const auto mat = fem::Material::neo_hookean(100.0, 0.3, 1.0);
  const VecX mass = fem::lumped_mass(mesh, mat.rho0);
  const auto force = [&](const VecX& d, double) {
    return VecX(-fem::internal_force(mesh, mat, d));
  };
  KdkState st;
  Rng rng(3);
  st.d = VecX::Zero(mesh.n_dofs());
  st.v = VecX::Zero(mesh.n_dofs());
  for (int i = 0; i < st.d.size(); ++i) {
    st.d[i] = 0.01 * rng.uniform(-1, 1);
    st.v[i] = 0.05 * rng.uniform(-1, 1);
  }
  const VecX d0 = st.d, v0 = st.v;
  st.a = force(st.d, 0.0).cwiseQuotient(mass);
  const double dt = 1e-3;
  for (int s = 0; s < 100; ++s) kdk_step(st, mass, dt, force);
  for (int s = 0; s < 100; ++s) kdk_step(st, mass, -dt, force);
  CHECK((st.d - d0).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK((st.v - v0).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("linear_solve") {
  SUBCASE("identity returns the right-hand side") {
    fem::SpMat I(3, 3);
    I.setIdentity();
    VecX b(3);
    b << 1, -2, 3;
    CHECK((linear_solve(I, b) - b).norm() == 0.0);
  }
  SUBCASE("2x2 against the hand inverse") {
    fem::SpMat A(2, 2);
    A.insert(0, 0) = 4.0;
    A.insert(0, 1) = 1.0;
    A.insert(1, 0) = 1.0;
    A.insert(1, 1) = 3.0;
    A.makeCompressed();
    VecX b(2);
    b << 1, 2;
    // inv([[4,1],[1,3]]) = 1/11 [[3,-1],[-1,4]]
    VecX x_ref(2);
    x_ref << (3.0 * 1 - 1.0 * 2) / 11.0, (-1.0 * 1 + 4.0 * 2) / 11.0;
    CHECK((linear_solve(A, b) - x_ref).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  SUBCASE("random SPD 100x100 meets the residual contract") {
    Rng rng(7);
    Eigen::MatrixXd M(100, 100);
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j) M(i, j) = rng.uniform(-1, 1);
    Eigen::MatrixXd S = M.transpose() * M +
                        100.0 * Eigen::MatrixXd::Identity(100, 100);
    fem::SpMat A = S.sparseView();
    VecX b(100);
    for (int i = 0; i < 100; ++i) b[i] = rng.uniform(-1, 1);
    const VecX x = linear_solve(A, b);
    CHECK((A * x - b).norm() / b.norm() <= 1e-10);
  }
  SUBCASE("singular matrix fails loudly") {
    fem::SpMat Z(2, 2);
    Z.insert(0, 0) = 1.0;
    Z.makeCompressed();  // second row/col entirely zero
    VecX b(2);
    b << 1, 1;
    CHECK_THROWS_AS(linear_solve(Z, b), SolverError);
  }
}

TEST_CASE("newton_inner") {
  const fem::Mesh2 mesh = square_mesh(0, 0, 1.0, 4);
  const VecX no_contact = VecX::Zero(mesh.n_dofs());

  SUBCASE("linear problem converges in exactly one iteration") {
    const auto lin = fem::Material::linear_elastic(200.0, 0.3, 1.0);
    std::vector<fem::BoundaryCondition> bcs = {
        fem::BoundaryCondition::dirichlet("bottom", {true, true, false},
                                          Vec3::Zero()),
        fem::BoundaryCondition::traction("top", Vec3(0, -5.0, 0))};
    VecX d = VecX::Zero(mesh.n_dofs());
    const auto rep = newton_inner(mesh, lin, d, bcs, 1.0, no_contact, 1e-9, 20);
    CHECK(rep.iterations == 1);
    CHECK(rep.residual_norm <= 1e-9);
  }

  SUBCASE("zero load returns zero after the initial residual check") {
    const auto lin = fem::Material::linear_elastic(200.0, 0.3, 1.0);
    VecX d = VecX::Zero(mesh.n_dofs());
    const auto rep = newton_inner(mesh, lin, d, {}, 1.0, no_contact, 1e-9, 20);
    CHECK(rep.iterations == 0);
    CHECK(d.norm() == 0.0);
  }

  SUBCASE("neo-hookean stretch shows quadratic residual decay") {
    const auto nh = fem::Material::neo_hookean(200.0, 0.3, 1.0);
    std::vector<fem::BoundaryCondition> bcs = {
        fem::BoundaryCondition::dirichlet("bottom", {true, true, false},
                                          Vec3::Zero()),
        fem::BoundaryCondition::dirichlet("top", {false, true, false},
                                          Vec3(0, 0.01, 0))};
    VecX d = VecX::Zero(mesh.n_dofs());
    const auto rep = newton_inner(mesh, nh, d, bcs, 1.0, no_contact, 1e-13, 30);
    std::vector<double> h;
    for (double r : rep.residual_history)
      if (r > 1e-12) h.push_back(r);  // exclude the roundoff floor
    REQUIRE(h.size() >= 4);
    std::vector<double> ratios;
    for (std::size_t i = 1; i < h.size(); ++i) ratios.push_back(h[i] / h[i - 1]);
    for (std::size_t i = 1; i < ratios.size(); ++i)
      CHECK(ratios[i] < ratios[i - 1]);  // accelerating contraction
    CHECK(ratios.back() <= 10.0 * ratios.front() * ratios.front());
    CHECK(rep.residual_norm <= 1e-13);
  }

  SUBCASE("iteration budget exhaustion throws") {
    const auto nh = fem::Material::neo_hookean(200.0, 0.3, 1.0);
    std::vector<fem::BoundaryCondition> bcs = {
        fem::BoundaryCondition::dirichlet("bottom", {true, true, false},
                                          Vec3::Zero()),
        fem::BoundaryCondition::dirichlet("top", {false, true, false},
                                          Vec3(0, 0.2, 0))};
    VecX d = VecX::Zero(mesh.n_dofs());
    CHECK_THROWS_AS(newton_inner(mesh, nh, d, bcs, 1.0, no_contact, 1e-30, 1),
                    SolverError);
  }
}

TEST_CASE("quasi-static without contact needs one outer iteration per step") {
  const fem::Mesh2 mesh = square_mesh(0, 0, 1.0, 4);
  System<2> sys;
  Body<2> body;
  body.name = "block";
  body.mesh = &mesh;
  body.material = fem::Material::linear_elastic(200.0, 0.3, 1.0);
  body.bcs = {fem::BoundaryCondition::dirichlet("bottom", {true, true, false},
                                                Vec3::Zero()),
              fem::BoundaryCondition::traction("top", Vec3(0, -2.0, 0))};
  sys.bodies.push_back(body);

  StaticsConfig cfg;
  cfg.load_steps = 3;
  const StaticSolver<2> solver_ctor_check(sys, cfg);
  StaticSolver<2> solver(sys, cfg);
  const auto steps = solver.solve();
  REQUIRE(steps.size() == 3);
  for (const auto& st : steps) {
    CHECK(st.outer_iterations == 1);
    CHECK(st.overlap_volume == 0.0);
  }
  // Reaction balances the applied traction at full load.
  CHECK(steps.back().reaction_force[0][1] == doctest::Approx(2.0));
}

TEST_CASE("quasi-static contact: convergence and self-consistency") {
  // Lower block fixed at the bottom; upper block pressed into it from the
  // top by a prescribed displacement. Dyadic-free generic coordinates.
  const fem::Mesh2 lower = square_mesh(0.0, 0.0, 1.0, 5);
  const fem::Mesh2 upper = square_mesh(0.15, 0.98, 0.7, 4);

  System<2> sys;
  Body<2> a;
  a.name = "lower";
  a.mesh = &lower;
  a.material = fem::Material::linear_elastic(300.0, 0.3, 1.0);
  a.bcs = {fem::BoundaryCondition::dirichlet("bottom", {true, true, false},
                                             Vec3::Zero())};
  Body<2> b;
  b.name = "upper";
  b.mesh = &upper;
  b.material = fem::Material::linear_elastic(300.0, 0.3, 1.0);
  b.bcs = {fem::BoundaryCondition::dirichlet("top", {true, true, false},
                                             Vec3(0, -0.05, 0))};
  sys.bodies = {a, b};
  // Flat-on-flat contact with the quadratic law: the contact force grows
  // with the overlap, which keeps the outer fixed point contractive.
  sys.contact.k = 300.0;
  sys.contact.m = 2.0;
  sys.contact.fibers = 40000;
  sys.contact.fiber_length = 0.125;

  StaticsConfig cfg;
  cfg.load_steps = 2;
  cfg.eps_outer = 8e-3;
  cfg.eps_inner = 1e-8;
  cfg.relaxation = 0.5;
  cfg.max_outer = 80;
  cfg.seed = 12345;

  StaticSolver<2> solver(sys, cfg);
  const auto steps = solver.solve();
  REQUIRE(steps.size() == 2);
  const auto& last = steps.back();
  CHECK(last.overlap_volume > 0.0);

  // Post-convergence consistency: re-evaluating the contact force at the
  // converged state and running one more inner solve moves the solution by
  // no more than 2 * eps_outer.
  const auto ce = evaluate_contact(sys, last.d, derive_seed(999, 1));
  double delta2 = 0.0;
  for (std::size_t i = 0; i < sys.bodies.size(); ++i) {
    VecX d_new = last.d[i];
    newton_inner(*sys.bodies[i].mesh, sys.bodies[i].material, d_new,
                 sys.bodies[i].bcs, 1.0, ce.forces[i], cfg.eps_inner,
                 cfg.max_inner);
    delta2 += (d_new - last.d[i]).squaredNorm();
  }
  CHECK(std::sqrt(delta2) <= 2.0 * cfg.eps_outer);
}

TEST_CASE("dynamic free flight and ballistic motion") {
  const fem::Mesh2 mesh = square_mesh(0, 0, 1.0, 3);
  System<2> sys;
  Body<2> body;
  body.name = "block";
  body.mesh = &mesh;
  body.material = fem::Material::linear_elastic(100.0, 0.0, 2.0);
  body.initial_velocity = Vec2(0.3, -0.1);

  SUBCASE("drift without forces conserves energy to machine precision") {
    sys.bodies = {body};
    DynamicsConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.1;
    cfg.output_every = 10;
    DynamicSolver<2> solver(sys, cfg);
    const auto records = solver.run();
    const double e0 = records.front().total;
    for (const auto& r : records) {
      CHECK(std::abs(r.total - e0) <= 1e-9 * e0);
      CHECK(r.strain <= 1e-12);
    }
  }

  SUBCASE("uniform body force gives linear velocity growth") {
    body.bcs = {fem::BoundaryCondition::body_force(Vec3(0, -20.0, 0))};
    sys.bodies = {body};
    DynamicsConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.05;
    DynamicSolver<2> solver(sys, cfg);
    const std::int64_t steps = 50;
    for (int s = 0; s < steps; ++s) solver.step();
    // a = f / rho = -10; rigid motion, no strain.
    const double t = solver.time();
    for (std::size_t i = 0; i < 1; ++i) {
      const VecX& v = solver.velocities()[0];
      for (int n = 0; n < mesh.n_nodes(); ++n) {
        CHECK(v[2 * n] == doctest::Approx(0.3));
        CHECK(v[2 * n + 1] == doctest::Approx(-0.1 - 10.0 * t).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("contact-free neo-hookean vibration has bounded energy drift") {
  const fem::Mesh2 mesh = square_mesh(0, 0, 1.0, 3, fem::ElemType::Tri3);
  System<2> sys;
  Body<2> body;
  body.name = "blob";
  body.mesh = &mesh;
  body.material = fem::Material::neo_hookean(100.0, 0.3, 1.0);
  // Anchored base plus a uniform launch velocity excites free vibration.
  body.bcs = {fem::BoundaryCondition::dirichlet("bottom", {true, true, false},
                                                Vec3::Zero())};
  body.initial_velocity = Vec2(0.5, -0.3);
  sys.bodies = {body};

  DynamicsConfig cfg;
  cfg.dt = cfl_dt(mesh, body.material, 0.04);
  cfg.t_end = 10000.5 * cfg.dt;
  cfg.output_every = 100;
  DynamicSolver<2> vib(sys, cfg);
  const auto records = vib.run();
  const double e0 = records.front().total;
  REQUIRE(e0 > 0.0);
  for (const auto& r : records)
    CHECK(std::abs(r.total - e0) / e0 <= 1e-3);
}

TEST_CASE("divergence raises a solver error naming the step") {
  const fem::Mesh2 mesh = square_mesh(0, 0, 1.0, 3);
  System<2> sys;
  Body<2> body;
  body.name = "block";
  body.mesh = &mesh;
  body.material = fem::Material::linear_elastic(1e6, 0.3, 1e-6);
  body.initial_velocity = Vec2(1000.0, 0);
  body.bcs = {fem::BoundaryCondition::dirichlet("bottom", {true, true, false},
                                                Vec3::Zero())};
  sys.bodies = {body};
  DynamicsConfig cfg;
  cfg.dt = 10.0;  // far beyond the stable step
  cfg.t_end = 1000.0;
  DynamicSolver<2> solver(sys, cfg);
  CHECK_THROWS_AS(
      [&] {
        for (int s = 0; s < 100; ++s) solver.step();
      }(),
      SolverError);
}
