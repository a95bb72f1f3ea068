#include "fcm/harness/verify_geometry.hpp"

#include <cmath>

#include "fcm/fmc/estimate.hpp"
#include "fcm/geometry/families.hpp"
#include "fcm/harness/clipping.hpp"

namespace fcm::harness {

namespace {

using geo::BoxSdf;
using geo::ConeSdf;
using geo::FamilyPtr;
using geo::HalfSpaceSdf;
using geo::MaxFamily;
using geo::FixedFamily;
using geo::ParamSdfFamily;
using geo::RadiusFamily;
using geo::RotationFamily;
using geo::SphereSdf;
using geo::TranslationFamily;

template <int D>
VerificationRow run_case(const std::string& name,
                         const ParamSdfFamily<D>& family, double theta,
                         const Box<D>& domain, double fiber_len,
                         std::int64_t fibers, std::uint64_t seed,
                         double value_ref, double grad_ref) {
  const auto batch = fmc::sample_fibers<D>(domain, fibers, fiber_len, seed);
  const auto est = fmc::estimate_gradient(batch, family, theta);
  VerificationRow row;
  row.case_name = name;
  row.fibers = fibers;
  row.value = est.value;
  row.value_ref = value_ref;
  row.value_relerr = std::abs(est.value - value_ref) / std::abs(value_ref);
  row.grad = est.theta_gradient;
  row.grad_ref = grad_ref;
  row.grad_relerr = std::abs(est.theta_gradient - grad_ref) / std::abs(grad_ref);
  return row;
}

Box2 box2(double x0, double y0, double x1, double y1) {
  Box2 b;
  b.lo = Vec2(x0, y0);
  b.hi = Vec2(x1, y1);
  return b;
}

Box3 box3(const Vec3& lo, const Vec3& hi) {
  Box3 b;
  b.lo = lo;
  b.hi = hi;
  return b;
}

//! Overlap area of two axis-aligned unit squares whose centers approach
//! along (theta, theta) and (-theta, -theta), plus its derivative.
void squares_reference(double theta, double& area, double& darea) {
  const double gap = 1.4 - 2.0 * theta;  // center distance per axis
  const double o = 1.0 - std::abs(gap);
  if (o <= 0.0) {
    area = 0.0;
    darea = 0.0;
    return;
  }
  area = o * o;
  darea = 2.0 * o * (gap > 0.0 ? 2.0 : -2.0);
}

//! Cone-cube overlap via closed-form slice areas (axis through the cube
//! center) integrated adaptively; the derivative by central differences of
//! the tight quadrature.
double cone_cube_volume(double theta, double apex0, double height,
                        double base_radius, double cube_half) {
  const double apex = apex0 - theta;
  const double zlo = std::max(apex, -cube_half);
  const double zhi = std::min(apex + height, cube_half);
  if (zhi <= zlo) return 0.0;
  const double slope = base_radius / height;
  return adaptive_simpson(
      [&](double z) {
        return disk_in_square_area(slope * (z - apex), cube_half);
      },
      zlo, zhi, 1e-13);
}

}  // namespace

std::vector<VerificationRow> geometry_verification_cases(
    std::uint64_t seed, const std::vector<std::int64_t>& schedule) {
  std::vector<VerificationRow> rows;
  const double ell = 0.3;

  // Case definitions; one fiber batch per (case, N).
  // 1. Circle of radius theta.
  const RadiusFamily<2> circle(Vec2(0, 0));
  // 2. Upper semicircle of radius theta against a fixed block.
  const double cut = 0.35;
  const auto half_disk = std::make_shared<MaxFamily<2>>(
      std::make_shared<RadiusFamily<2>>(Vec2(0, 0)),
      std::make_shared<FixedFamily<2>>(
          std::make_shared<HalfSpaceSdf<2>>(Vec2(0, -1), 0.0)));
  const auto block = std::make_shared<FixedFamily<2>>(
      std::make_shared<BoxSdf<2>>(Vec2(0, -0.325), Vec2(2.0, 0.675)));
  const MaxFamily<2> semi_block(half_disk, block);
  const double semi_area =
      cut * std::sqrt(1.0 - cut * cut) + std::asin(cut);
  const double semi_darea = 2.0 * std::asin(cut);

  // 3. Two translating unit squares.
  const auto sq1 = std::make_shared<TranslationFamily<2>>(
      std::make_shared<BoxSdf<2>>(Vec2(-0.7, -0.7), Vec2(0.5, 0.5)),
      Vec2(1, 1));
  const auto sq2 = std::make_shared<TranslationFamily<2>>(
      std::make_shared<BoxSdf<2>>(Vec2(0.7, 0.7), Vec2(0.5, 0.5)),
      Vec2(-1, -1));
  const MaxFamily<2> squares(sq1, sq2);
  const double sq_theta = 0.45;
  double sq_area, sq_darea;
  squares_reference(sq_theta, sq_area, sq_darea);

  // 4. Sphere of radius theta.
  const RadiusFamily<3> sphere(Vec3(0, 0, 0));

  // 5. Cone translating down into a fixed cube, axis through the center.
  const double apex0 = 0.8, cone_h = 1.0, cone_r = 0.5, cube_half = 0.5;
  const auto cone_fam = std::make_shared<TranslationFamily<3>>(
      std::make_shared<ConeSdf>(Vec3(0, 0, apex0), Vec3(0, 0, 1), cone_h,
                                cone_r),
      Vec3(0, 0, -1));
  const auto cube_fam = std::make_shared<FixedFamily<3>>(
      std::make_shared<BoxSdf<3>>(Vec3::Zero(), Vec3::Constant(cube_half)));
  const MaxFamily<3> cone_cube(cone_fam, cube_fam);
  const double cone_theta = 0.8;
  const double cone_v =
      cone_cube_volume(cone_theta, apex0, cone_h, cone_r, cube_half);
  const double dh = 1e-5;
  const double cone_dv =
      (cone_cube_volume(cone_theta + dh, apex0, cone_h, cone_r, cube_half) -
       cone_cube_volume(cone_theta - dh, apex0, cone_h, cone_r, cube_half)) /
      (2 * dh);

  // 6. Unit cube rotating about z inside a fixed slightly-smaller box.
  const auto rot_cube = std::make_shared<RotationFamily<3>>(
      std::make_shared<BoxSdf<3>>(Vec3::Zero(), Vec3::Constant(0.5)),
      Vec3(0, 0, 1));
  const auto window = std::make_shared<FixedFamily<3>>(
      std::make_shared<BoxSdf<3>>(Vec3::Zero(), Vec3(0.45, 0.45, 0.6)));
  const MaxFamily<3> rot_case(rot_cube, window);
  const double rot_theta = 0.3;
  const auto rot_area = [](double th) {
    return polygon_area(convex_clip(rotated_square(1.0, th),
                                    rectangle(Vec2(0, 0), Vec2(0.45, 0.45))));
  };
  const double rot_v = rot_area(rot_theta);  // z-overlap is exactly 1
  const double rot_dv =
      (rot_area(rot_theta + 1e-5) - rot_area(rot_theta - 1e-5)) / 2e-5;

  std::uint64_t tag = 0;
  for (std::int64_t n : schedule) {
    rows.push_back(run_case<2>("circle", circle, 1.0, box2(-1.3, -1.3, 1.3, 1.3),
                               ell, n, derive_seed(seed, tag++), kPi,
                               2.0 * kPi));
    rows.push_back(run_case<2>("semicircle_block", semi_block, 1.0,
                               box2(-1.4, -0.4, 1.4, 0.75), ell, n,
                               derive_seed(seed, tag++), semi_area,
                               semi_darea));
    rows.push_back(run_case<2>("translating_squares", squares, sq_theta,
                               box2(-0.65, -0.65, 0.65, 0.65), ell, n,
                               derive_seed(seed, tag++), sq_area, sq_darea));
    rows.push_back(run_case<3>(
        "sphere", sphere, 1.0,
        box3(Vec3::Constant(-1.3), Vec3::Constant(1.3)), ell, n,
        derive_seed(seed, tag++), 4.0 * kPi / 3.0, 4.0 * kPi));
    rows.push_back(run_case<3>(
        "cone_cube", cone_cube, cone_theta,
        box3(Vec3::Constant(-0.85), Vec3::Constant(0.85)), ell, n,
        derive_seed(seed, tag++), cone_v, cone_dv));
    rows.push_back(run_case<3>(
        "rotating_cube", rot_case, rot_theta,
        box3(Vec3(-0.8, -0.8, -0.85), Vec3(0.8, 0.8, 0.85)), ell, n,
        derive_seed(seed, tag++), rot_v, rot_dv));
  }
  return rows;
}

}  // namespace fcm::harness
