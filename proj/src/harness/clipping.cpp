#include "fcm/harness/clipping.hpp"

#include <cmath>

namespace fcm::harness {

double polygon_area(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * twice;
}

std::vector<Vec2> convex_clip(const std::vector<Vec2>& subject,
                              const std::vector<Vec2>& clip) {
  std::vector<Vec2> out = subject;
  for (std::size_t e = 0; e < clip.size() && !out.empty(); ++e) {
    const Vec2 a = clip[e];
    const Vec2 b = clip[(e + 1) % clip.size()];
    const auto inside = [&](const Vec2& p) {
      return (b.x() - a.x()) * (p.y() - a.y()) -
                 (b.y() - a.y()) * (p.x() - a.x()) >=
             0.0;
    };
    const auto intersect = [&](const Vec2& p, const Vec2& q) {
      const Vec2 d1 = q - p, d2 = b - a;
      const double denom = d1.x() * d2.y() - d1.y() * d2.x();
      const double t =
          ((a.x() - p.x()) * d2.y() - (a.y() - p.y()) * d2.x()) / denom;
      return Vec2(p + t * d1);
    };
    std::vector<Vec2> in;
    in.swap(out);
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Vec2& cur = in[i];
      const Vec2& prv = in[(i + in.size() - 1) % in.size()];
      const bool cin = inside(cur), pin = inside(prv);
      if (cin) {
        if (!pin) out.push_back(intersect(prv, cur));
        out.push_back(cur);
      } else if (pin) {
        out.push_back(intersect(prv, cur));
      }
    }
  }
  return out;
}

std::vector<Vec2> rectangle(const Vec2& center, const Vec2& half) {
  return {center + Vec2(-half.x(), -half.y()),
          center + Vec2(half.x(), -half.y()),
          center + Vec2(half.x(), half.y()),
          center + Vec2(-half.x(), half.y())};
}

std::vector<Vec2> rotated_square(double side, double angle) {
  const double h = 0.5 * side;
  std::vector<Vec2> corners = {{-h, -h}, {h, -h}, {h, h}, {-h, h}};
  const double c = std::cos(angle), s = std::sin(angle);
  for (auto& p : corners)
    p = Vec2(c * p.x() - s * p.y(), s * p.x() + c * p.y());
  return corners;
}

double disk_in_square_area(double r, double s) {
  if (r <= s) return kPi * r * r;
  if (r * r >= 2.0 * s * s) return 4.0 * s * s;
  // Circle minus the four segments that stick out past the sides.
  const double seg = r * r * std::acos(s / r) - s * std::sqrt(r * r - s * s);
  return kPi * r * r - 4.0 * seg;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa,
                   double b, double fb, double m, double fm, double whole,
                   double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  return simpson_rec(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm),
                     tol, 40);
}

}  // namespace fcm::harness
