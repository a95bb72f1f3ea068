#pragma once

#include "fcm/types.hpp"

namespace fcm::geo {

//! Closest point on segment [a,b]; t is the clamped parameter in [0,1].
template <int D>
struct SegmentClosest {
  Vec<D> point;
  double t;
};

template <int D>
inline SegmentClosest<D> closest_point_segment(const Vec<D>& p, const Vec<D>& a,
                                               const Vec<D>& b) {
  const Vec<D> ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return {Vec<D>(a + t * ab), t};
}

//! Closest point on triangle (a,b,c) with barycentric weights.
//! Region classification follows the standard Voronoi-region walk, so
//! weights are exactly zero on the features they exclude.
struct TriangleClosest {
  Vec3 point;
  double w[3];
};

inline TriangleClosest closest_point_triangle(const Vec3& p, const Vec3& a,
                                              const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return {a, {1.0, 0.0, 0.0}};

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return {b, {0.0, 1.0, 0.0}};

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return {Vec3(a + v * ab), {1.0 - v, v, 0.0}};
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return {c, {0.0, 0.0, 1.0}};

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return {Vec3(a + w * ac), {1.0 - w, 0.0, w}};
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {Vec3(b + w * (c - b)), {0.0, 1.0 - w, w}};
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return {Vec3(a + ab * v + ac * w), {1.0 - v - w, v, w}};
}

}  // namespace fcm::geo
