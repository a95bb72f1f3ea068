#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcm/geometry/families.hpp"
#include "fcm/geometry/sdf.hpp"
#include "fcm/rng.hpp"
#include "reference_checks.hpp"

using namespace fcm;
using namespace fcm::geo;

TEST_CASE("disk sdf values") {
  SphereSdf<2> disk(Vec2(0, 0), 1.0);
  CHECK(disk.value(Vec2(0, 0)) == doctest::Approx(-1.0));
  CHECK(disk.value(Vec2(2, 0)) == doctest::Approx(1.0));
  CHECK(disk.value(Vec2(1, 0)) == doctest::Approx(0.0));
}

TEST_CASE("max composition of two unit disks") {
  auto d1 = std::make_shared<SphereSdf<2>>(Vec2(0, 0), 1.0);
  auto d2 = std::make_shared<SphereSdf<2>>(Vec2(1, 0), 1.0);
  IntersectionSdf<2> both({d1, d2});
  CHECK(both.value(Vec2(0.5, 0)) == doctest::Approx(-0.5));
}

TEST_CASE("half space gradient is the constant outward normal") {
  // Inside { y <= 0 }.
  HalfSpaceSdf<2> hs(Vec2(0, 1), 0.0);
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Vec2 x(rng.uniform(-5, 5), rng.uniform(-5, 5));
    CHECK((hs.gradient(x) - Vec2(0, 1)).norm() == doctest::Approx(0.0));
    CHECK(hs.value(x) == doctest::Approx(x.y()));
  }
}

TEST_CASE("disk gradient is radial") {
  SphereSdf<2> disk(Vec2(0, 0), 1.0);
  CHECK((disk.gradient(Vec2(2, 0)) - Vec2(1, 0)).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("primitive gradients are unit norm away from corners") {
  BoxSdf<2> box(Vec2(0.5, -0.25), Vec2(1.0, 0.75));
  SphereSdf<3> ball(Vec3(0.1, 0.2, -0.3), 0.8);
  ConeSdf cone(Vec3(0, 0, 1), Vec3(0, 0, -1), 1.0, 0.6);
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const Vec2 x2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Vec3 x3(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    if (std::abs(box.value(x2)) > 1e-6)
      CHECK(box.gradient(x2).norm() == doctest::Approx(1.0).epsilon(1e-9));
    if (std::abs(ball.value(x3)) > 1e-6)
      CHECK(ball.gradient(x3).norm() == doctest::Approx(1.0).epsilon(1e-9));
    if (std::abs(cone.value(x3)) > 1e-6)
      CHECK(cone.gradient(x3).norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

namespace {

// The gradient field of an exact distance is smooth where the nearest
// feature is unique and the point is off the boundary; probe that by
// comparing gradients in a small neighborhood.
template <int N>
bool locally_smooth(const Sdf<N>& s, const Vec<N>& x, double h) {
  if (std::abs(s.value(x)) < 1e-4) return false;
  const Vec<N> g = s.gradient(x);
  for (int k = 0; k < N; ++k) {
    Vec<N> xp = x, xm = x;
    xp[k] += 8 * h;
    xm[k] -= 8 * h;
    if ((s.gradient(xp) - g).norm() > 1e-4) return false;
    if ((s.gradient(xm) - g).norm() > 1e-4) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("primitive gradients match finite differences") {
  BoxSdf<2> box(Vec2(0, 0), Vec2(1.0, 0.5));
  ConvexPolygonSdf poly({Vec2(0, 0), Vec2(2, 0), Vec2(1.5, 1), Vec2(0.2, 1.2)});
  ConeSdf cone(Vec3(0, 0, 1), Vec3(0, 0, -1), 1.0, 0.6);
  Rng rng(3);
  const double h = 1e-7;
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const Vec2 x2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Vec3 x3(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    for (const Sdf<2>* s : {static_cast<const Sdf<2>*>(&box),
                            static_cast<const Sdf<2>*>(&poly)}) {
      if (!locally_smooth(*s, x2, h)) continue;
      Vec2 g_fd;
      for (int k = 0; k < 2; ++k) {
        Vec2 xp = x2, xm = x2;
        xp[k] += h;
        xm[k] -= h;
        g_fd[k] = (s->value(xp) - s->value(xm)) / (2 * h);
      }
      CHECK((s->gradient(x2) - g_fd).norm() < 5e-6);
      ++checked;
    }
    if (locally_smooth(cone, x3, h)) {
      Vec3 g_fd;
      for (int k = 0; k < 3; ++k) {
        Vec3 xp = x3, xm = x3;
        xp[k] += h;
        xm[k] -= h;
        g_fd[k] = (cone.value(xp) - cone.value(xm)) / (2 * h);
      }
      CHECK((cone.gradient(x3) - g_fd).norm() < 5e-6);
      ++checked;
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("polygon sign matches winding-number classification") {
  const std::vector<Vec2> verts = {Vec2(0, 0), Vec2(2, 0), Vec2(2.5, 1.5),
                                   Vec2(1, 2.2), Vec2(-0.5, 1)};
  ConvexPolygonSdf poly(verts);
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 x(rng.uniform(-1.5, 3.5), rng.uniform(-1.5, 3.5));
    const double v = poly.value(x);
    if (std::abs(v) < 1e-9) continue;
    CHECK((v < 0.0) == refcheck::inside_polygon(verts, x));
  }
}

TEST_CASE("cone sdf sign against geometric predicate") {
  const Vec3 apex(0.2, -0.1, 1.0);
  const Vec3 axis = Vec3(0.1, 0.2, -1.0).normalized();
  const double height = 1.2, rbase = 0.7;
  ConeSdf cone(apex, axis, height, rbase);
  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    const double z = (x - apex).dot(axis);
    const double rho = ((x - apex) - z * axis).norm();
    const bool inside = z >= 0 && z <= height && rho <= z * rbase / height;
    const double v = cone.value(x);
    if (std::abs(v) < 1e-9) continue;
    CHECK((v < 0.0) == inside);
  }
}

TEST_CASE("intersection zero set equals boundary of set intersection") {
  auto d1 = std::make_shared<SphereSdf<2>>(Vec2(0, 0), 1.0);
  auto bx = std::make_shared<BoxSdf<2>>(Vec2(0.7, 0), Vec2(0.8, 0.8));
  IntersectionSdf<2> inter({d1, bx});
  Rng rng(29);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 x(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const bool in_both = d1->value(x) < 0 && bx->value(x) < 0;
    const double v = inter.value(x);
    if (std::abs(v) < 1e-9) continue;
    CHECK((v < 0.0) == in_both);
  }
}

TEST_CASE("union and complement semantics") {
  auto d1 = std::make_shared<SphereSdf<2>>(Vec2(-0.5, 0), 0.6);
  auto d2 = std::make_shared<SphereSdf<2>>(Vec2(0.5, 0), 0.6);
  UnionSdf<2> u({d1, d2});
  ComplementSdf<2> c(d1);
  CHECK(u.value(Vec2(0.5, 0)) == doctest::Approx(-0.6));
  CHECK(u.value(Vec2(-0.5, 0)) == doctest::Approx(-0.6));
  CHECK(c.value(Vec2(-0.5, 0)) == doctest::Approx(0.6));
}

TEST_CASE("transformed box equals rotated evaluation") {
  auto box = std::make_shared<BoxSdf<2>>(Vec2(0, 0), Vec2(0.5, 0.5));
  const double th = 0.3;
  Eigen::Matrix2d R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  TransformedSdf<2> moved(box, Vec2(1.0, -2.0), R);
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const Vec2 y(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Vec2 x = R * y + Vec2(1.0, -2.0);
    CHECK(moved.value(x) == doctest::Approx(box->value(y)).epsilon(1e-12));
  }
}

TEST_CASE("wedge triangle has the requested slope") {
  // Apex at origin, receding along -x, 45 degree faces.
  auto wedge = make_wedge2d(Vec2(0, 0), Vec2(-1, 0), kPi / 4, 2.0);
  CHECK(wedge->value(Vec2(0, 0)) == doctest::Approx(0.0));
  CHECK(wedge->value(Vec2(-1.0, 0.999)) < 0.0);   // just inside the face
  CHECK(wedge->value(Vec2(-1.0, 1.001)) > 0.0);   // just outside
  CHECK(wedge->value(Vec2(0.5, 0)) == doctest::Approx(0.5));  // apex is nearest
}

namespace {

// Theta-smoothness probe analogous to locally_smooth: the derivative of a
// family is continuous where small theta shifts keep the same feature.
template <int N>
bool theta_smooth(const ParamSdfFamily<N>& fam, double theta, const Vec<N>& x) {
  if (std::abs(fam.value(theta, x)) < 1e-3) return false;
  const double d0 = fam.theta_derivative(theta, x);
  return std::abs(fam.theta_derivative(theta + 1e-4, x) - d0) < 1e-3 &&
         std::abs(fam.theta_derivative(theta - 1e-4, x) - d0) < 1e-3;
}

}  // namespace

TEST_CASE("scalar families: analytic theta derivatives match FD") {
  auto box = std::make_shared<BoxSdf<2>>(Vec2(0, 0), Vec2(0.5, 0.5));
  RadiusFamily<2> radius(Vec2(0.1, -0.2));
  TranslationFamily<2> trans(box, Vec2(1, 1).normalized());
  RotationFamily<2> rot(box);
  Rng rng(37);
  const double h = 1e-6, theta = 0.37;
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const Vec2 x(rng.uniform(-2, 2), rng.uniform(-2, 2));
    for (const ParamSdfFamily<2>* fam :
         {static_cast<const ParamSdfFamily<2>*>(&radius),
          static_cast<const ParamSdfFamily<2>*>(&trans),
          static_cast<const ParamSdfFamily<2>*>(&rot)}) {
      if (!theta_smooth(*fam, theta, x)) continue;
      const double fd =
          (fam->value(theta + h, x) - fam->value(theta - h, x)) / (2 * h);
      CHECK(fam->theta_derivative(theta, x) ==
            doctest::Approx(fd).epsilon(1e-5));
      ++checked;
    }
  }
  CHECK(checked > 400);
}

TEST_CASE("3d rotation family derivative") {
  auto box = std::make_shared<BoxSdf<3>>(Vec3(0, 0, 0), Vec3(0.5, 0.4, 0.3));
  RotationFamily<3> rot(box, Vec3(0, 0, 1));
  const double h = 1e-6, theta = 0.21;
  Rng rng(41);
  int checked = 0;
  for (int i = 0; i < 500 && checked < 50; ++i) {
    const Vec3 x(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (!theta_smooth(rot, theta, x)) continue;
    const double fd =
        (rot.value(theta + h, x) - rot.value(theta - h, x)) / (2 * h);
    CHECK(rot.theta_derivative(theta, x) == doctest::Approx(fd).epsilon(1e-5));
    ++checked;
  }
  CHECK(checked >= 30);
}

TEST_CASE("malformed shapes raise configuration errors") {
  CHECK_THROWS_AS(SphereSdf<2>(Vec2(0, 0), 0.0), ConfigError);
  CHECK_THROWS_AS(ConvexPolygonSdf({Vec2(0, 0), Vec2(1, 0)}), ConfigError);
  CHECK_THROWS_AS(BoxSdf<3>(Vec3::Zero(), Vec3(1, -1, 1)), ConfigError);
}
