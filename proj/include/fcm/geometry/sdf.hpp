#pragma once

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "fcm/geometry/closest_point.hpp"
#include "fcm/types.hpp"

namespace fcm::geo {

//! Signed distance field: negative strictly inside, zero on the boundary,
//! positive outside. Primitives return exact Euclidean distance and are
//! 1-Lipschitz; composed fields keep the sign/zero-set semantics only.
//!
//! Evaluation is pure and reentrant after construction.
template <int D>
class Sdf {
 public:
  virtual ~Sdf() = default;

  virtual double value(const Vec<D>& x) const = 0;

  //! Spatial gradient; unit norm for exact-distance fields away from
  //! non-smooth loci. On a corner or medial axis a subgradient member is
  //! returned (never a failure).
  virtual Vec<D> gradient(const Vec<D>& x) const = 0;

  //! Conservative bound of the inside region, used to localize sampling.
  virtual Box<D> bounding_box() const = 0;
};

template <int D>
using SdfPtr = std::shared_ptr<const Sdf<D>>;

// ---------------------------------------------------------------------------
// Primitives
// ---------------------------------------------------------------------------

//! Half-space { n·x <= offset } with unit outward normal n.
template <int D>
class HalfSpaceSdf final : public Sdf<D> {
 public:
  HalfSpaceSdf(const Vec<D>& outward_normal, double offset)
      : n_(outward_normal.normalized()), c_(offset) {
    if (outward_normal.norm() == 0.0)
      throw ConfigError("half-space: zero normal");
  }

  double value(const Vec<D>& x) const override { return n_.dot(x) - c_; }
  Vec<D> gradient(const Vec<D>&) const override { return n_; }
  Box<D> bounding_box() const override {
    Box<D> b;
    b.lo = Vec<D>::Constant(-std::numeric_limits<double>::infinity());
    b.hi = Vec<D>::Constant(std::numeric_limits<double>::infinity());
    // Axis-aligned normals bound the inside half-space on one side, which
    // localizes contact sampling domains.
    for (int k = 0; k < D; ++k) {
      if (n_[k] == 1.0 && n_.norm() == 1.0) b.hi[k] = c_;
      if (n_[k] == -1.0 && n_.norm() == 1.0) b.lo[k] = -c_;
    }
    return b;
  }

 private:
  Vec<D> n_;
  double c_;
};

//! Disk (2D) / sphere (3D).
template <int D>
class SphereSdf final : public Sdf<D> {
 public:
  SphereSdf(const Vec<D>& center, double radius) : c_(center), r_(radius) {
    if (!(radius > 0.0)) throw ConfigError("sphere: radius must be positive");
  }

  double value(const Vec<D>& x) const override { return (x - c_).norm() - r_; }

  Vec<D> gradient(const Vec<D>& x) const override {
    const Vec<D> d = x - c_;
    const double n = d.norm();
    if (n == 0.0) return Vec<D>::Unit(0);  // center: any radial subgradient
    return d / n;
  }

  Box<D> bounding_box() const override {
    Box<D> b;
    b.lo = c_.array() - r_;
    b.hi = c_.array() + r_;
    return b;
  }

  double radius() const { return r_; }
  const Vec<D>& center() const { return c_; }

 private:
  Vec<D> c_;
  double r_;
};

//! Axis-aligned box, exact distance inside and out.
template <int D>
class BoxSdf final : public Sdf<D> {
 public:
  BoxSdf(const Vec<D>& center, const Vec<D>& half_extent)
      : c_(center), h_(half_extent) {
    if ((half_extent.array() <= 0.0).any())
      throw ConfigError("box: half extents must be positive");
  }

  double value(const Vec<D>& x) const override {
    const Vec<D> q = (x - c_).cwiseAbs() - h_;
    const Vec<D> qp = q.cwiseMax(0.0);
    return qp.norm() + std::min(q.maxCoeff(), 0.0);
  }

  Vec<D> gradient(const Vec<D>& x) const override {
    const Vec<D> d = x - c_;
    const Vec<D> q = d.cwiseAbs() - h_;
    Vec<D> g = Vec<D>::Zero();
    if (q.maxCoeff() > 0.0) {
      const Vec<D> qp = q.cwiseMax(0.0);
      const double n = qp.norm();
      for (int k = 0; k < D; ++k)
        g[k] = (qp[k] / n) * (d[k] < 0.0 ? -1.0 : 1.0);
    } else {
      int axis = 0;
      q.maxCoeff(&axis);
      g[axis] = d[axis] < 0.0 ? -1.0 : 1.0;
    }
    return g;
  }

  Box<D> bounding_box() const override {
    Box<D> b;
    b.lo = c_ - h_;
    b.hi = c_ + h_;
    return b;
  }

 private:
  Vec<D> c_, h_;
};

//! Convex polygon (2D), counterclockwise vertices; exact distance, sign by
//! the all-edges half-plane test. Corners return the normalized (x - vertex)
//! subgradient.
class ConvexPolygonSdf final : public Sdf<2> {
 public:
  explicit ConvexPolygonSdf(std::vector<Vec2> vertices)
      : v_(std::move(vertices)) {
    if (v_.size() < 3) throw ConfigError("polygon: needs >= 3 vertices");
    double area2 = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      const Vec2& a = v_[i];
      const Vec2& b = v_[(i + 1) % v_.size()];
      area2 += a.x() * b.y() - b.x() * a.y();
    }
    if (!(area2 > 0.0))
      throw ConfigError("polygon: vertices must be counterclockwise");
    Box2 bb;
    for (const auto& p : v_) bb.absorb(p);
    boundary_tol_ = 1e-9 * bb.extent().norm();
  }

  double value(const Vec2& x) const override {
    double best2 = std::numeric_limits<double>::infinity();
    bool inside = true;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      const Vec2& a = v_[i];
      const Vec2& b = v_[(i + 1) % v_.size()];
      const auto cp = closest_point_segment<2>(x, a, b);
      best2 = std::min(best2, (x - cp.point).squaredNorm());
      const Vec2 e = b - a;
      if (e.x() * (x.y() - a.y()) - e.y() * (x.x() - a.x()) < 0.0)
        inside = false;
    }
    return (inside ? -1.0 : 1.0) * std::sqrt(best2);
  }

  Vec2 gradient(const Vec2& x) const override {
    double best2 = std::numeric_limits<double>::infinity();
    Vec2 cbest = v_[0];
    std::size_t ebest = 0;
    bool inside = true;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      const Vec2& a = v_[i];
      const Vec2& b = v_[(i + 1) % v_.size()];
      const auto cp = closest_point_segment<2>(x, a, b);
      const double d2 = (x - cp.point).squaredNorm();
      if (d2 < best2) {
        best2 = d2;
        cbest = cp.point;
        ebest = i;
      }
      const Vec2 e = b - a;
      if (e.x() * (x.y() - a.y()) - e.y() * (x.x() - a.x()) < 0.0)
        inside = false;
    }
    const double dist = std::sqrt(best2);
    // Near the zero set (x - closest) is rounding noise: use the outward
    // normal of the nearest edge, the two-sided limit of the gradient.
    if (dist > boundary_tol_)
      return (inside ? -1.0 : 1.0) * (x - cbest) / dist;
    const Vec2 e =
        (v_[(ebest + 1) % v_.size()] - v_[ebest]).normalized();
    return Vec2(e.y(), -e.x());
  }

  Box2 bounding_box() const override {
    Box2 b;
    for (const auto& p : v_) b.absorb(p);
    return b;
  }

  const std::vector<Vec2>& vertices() const { return v_; }

 private:
  std::vector<Vec2> v_;
  double boundary_tol_ = 0.0;
};

//! Wedge indenter (2D): apex at `apex`, body receding along `direction`,
//! faces sloped at angle beta against the plane orthogonal to `direction`.
//! Realized as a triangle of finite depth.
inline std::shared_ptr<ConvexPolygonSdf> make_wedge2d(const Vec2& apex,
                                                      const Vec2& direction,
                                                      double beta_rad,
                                                      double depth) {
  if (!(beta_rad > 0.0 && beta_rad < kPi / 2))
    throw ConfigError("wedge: beta must be in (0, 90) degrees");
  const Vec2 d = direction.normalized();
  const Vec2 t(-d.y(), d.x());
  const double w = depth / std::tan(beta_rad);
  std::vector<Vec2> verts = {apex, apex + depth * d + w * t,
                             apex + depth * d - w * t};
  // Reorder counterclockwise if needed.
  const Vec2 e1 = verts[1] - verts[0], e2 = verts[2] - verts[0];
  if (e1.x() * e2.y() - e1.y() * e2.x() < 0.0) std::swap(verts[1], verts[2]);
  return std::make_shared<ConvexPolygonSdf>(std::move(verts));
}

//! Convex polyhedron (3D) from vertices and outward-oriented triangles.
//! Exact distance via triangle features; sign by face half-space tests.
class ConvexPolyhedronSdf final : public Sdf<3> {
 public:
  ConvexPolyhedronSdf(std::vector<Vec3> vertices,
                      std::vector<std::array<int, 3>> faces)
      : v_(std::move(vertices)), f_(std::move(faces)) {
    if (v_.size() < 4 || f_.empty())
      throw ConfigError("polyhedron: needs vertices and faces");
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : v_) centroid += p;
    centroid /= static_cast<double>(v_.size());
    for (const auto& f : f_) {
      Vec3 n = (v_[f[1]] - v_[f[0]]).cross(v_[f[2]] - v_[f[0]]);
      if (n.norm() == 0.0) throw ConfigError("polyhedron: degenerate face");
      n.normalize();
      if (n.dot(centroid - v_[f[0]]) > 0.0)
        throw ConfigError("polyhedron: face not outward-oriented");
      n_.push_back(n);
    }
    Box3 bb;
    for (const auto& p : v_) bb.absorb(p);
    boundary_tol_ = 1e-9 * bb.extent().norm();
  }

  double value(const Vec3& x) const override {
    double best2 = std::numeric_limits<double>::infinity();
    bool inside = true;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      const auto cp =
          closest_point_triangle(x, v_[f_[i][0]], v_[f_[i][1]], v_[f_[i][2]]);
      best2 = std::min(best2, (x - cp.point).squaredNorm());
      if (n_[i].dot(x - v_[f_[i][0]]) > 0.0) inside = false;
    }
    return (inside ? -1.0 : 1.0) * std::sqrt(best2);
  }

  Vec3 gradient(const Vec3& x) const override {
    double best2 = std::numeric_limits<double>::infinity();
    Vec3 cbest = v_[0];
    std::size_t fbest = 0;
    bool inside = true;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      const auto cp =
          closest_point_triangle(x, v_[f_[i][0]], v_[f_[i][1]], v_[f_[i][2]]);
      const double d2 = (x - cp.point).squaredNorm();
      if (d2 < best2) {
        best2 = d2;
        cbest = cp.point;
        fbest = i;
      }
      if (n_[i].dot(x - v_[f_[i][0]]) > 0.0) inside = false;
    }
    const double dist = std::sqrt(best2);
    if (dist > boundary_tol_) {
      Vec3 g = (x - cbest) / dist;
      return inside ? Vec3(-g) : g;
    }
    return n_[fbest];  // on-boundary limit: nearest face normal
  }

  Box3 bounding_box() const override {
    Box3 b;
    for (const auto& p : v_) b.absorb(p);
    return b;
  }

 private:
  std::vector<Vec3> v_;
  std::vector<std::array<int, 3>> f_;
  std::vector<Vec3> n_;
  double boundary_tol_ = 0.0;
};

//! Solid finite cone (3D): apex point, unit axis toward the base, height,
//! base radius. Exact distance via the generating polyline in the
//! (radial, axial) half-plane of the surface of revolution.
class ConeSdf final : public Sdf<3> {
 public:
  ConeSdf(const Vec3& apex, const Vec3& axis, double height, double base_radius)
      : apex_(apex), axis_(axis.normalized()), h_(height), r_(base_radius) {
    if (!(height > 0.0) || !(base_radius > 0.0))
      throw ConfigError("cone: height and base radius must be positive");
    boundary_tol_ = 1e-9 * std::max(height, base_radius);
  }

  double value(const Vec3& x) const override {
    Vec2 p, g;
    return eval2d(x, p, g);
  }

  Vec3 gradient(const Vec3& x) const override {
    Vec2 p, g2;
    eval2d(x, p, g2);
    const Vec3 rel = x - apex_;
    const double z = rel.dot(axis_);
    const Vec3 radial = rel - z * axis_;
    const double rho = radial.norm();
    Vec3 rho_hat;
    if (rho > 1e-300) {
      rho_hat = radial / rho;
    } else {
      // On the axis the radial direction is degenerate; pick any unit
      // vector orthogonal to the axis (subgradient).
      rho_hat = axis_.unitOrthogonal();
    }
    return g2.x() * rho_hat + g2.y() * axis_;
  }

  Box3 bounding_box() const override {
    Box3 b;
    b.absorb(apex_);
    const Vec3 base = apex_ + h_ * axis_;
    for (int k = 0; k < 3; ++k) {
      const double s = std::sqrt(std::max(0.0, 1.0 - axis_[k] * axis_[k]));
      Vec3 e = Vec3::Zero();
      e[k] = r_ * s;
      b.absorb(base + e);
      b.absorb(base - e);
    }
    return b;
  }

 private:
  //! Distance and gradient in generator coordinates (rho, z).
  double eval2d(const Vec3& x, Vec2& p, Vec2& g) const {
    const Vec3 rel = x - apex_;
    const double z = rel.dot(axis_);
    const double rho = (rel - z * axis_).norm();
    p = Vec2(rho, z);
    const Vec2 a(0.0, 0.0);        // apex
    const Vec2 b(r_, h_);          // base rim
    const Vec2 c(0.0, h_);         // base center
    const auto s1 = closest_point_segment<2>(p, a, b);  // lateral surface
    const auto s2 = closest_point_segment<2>(p, b, c);  // base disk
    const double d1 = (p - s1.point).norm();
    const double d2 = (p - s2.point).norm();
    const Vec2 cp = (d1 <= d2) ? s1.point : s2.point;
    const double dist = std::min(d1, d2);
    const bool inside = (z >= 0.0 && z <= h_ && rho <= z * (r_ / h_));
    if (dist > boundary_tol_) {
      g = (p - cp) / dist;
      if (inside) g = -g;
    } else {
      // Near the zero set: outward normal of the nearest generator piece
      // (the two-sided limit of the gradient).
      const Vec2 e = (d1 <= d2) ? (b - a).normalized() : (c - b).normalized();
      g = Vec2(e.y(), -e.x());
    }
    return (inside ? -1.0 : 1.0) * dist;
  }

  Vec3 apex_, axis_;
  double h_, r_;
  double boundary_tol_ = 0.0;
};

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

//! Rigid pose wrapper: translate + rotate a base field. Rigid motion
//! preserves exact distance.
template <int D>
class TransformedSdf final : public Sdf<D> {
 public:
  using Rot = Eigen::Matrix<double, D, D>;

  TransformedSdf(SdfPtr<D> base, const Vec<D>& translation, const Rot& rotation)
      : base_(std::move(base)), t_(translation), r_(rotation) {
    if (std::abs(std::abs(r_.determinant()) - 1.0) > 1e-12)
      throw ConfigError("transform: rotation must be orthonormal");
  }

  double value(const Vec<D>& x) const override {
    return base_->value(r_.transpose() * (x - t_));
  }

  Vec<D> gradient(const Vec<D>& x) const override {
    return r_ * base_->gradient(r_.transpose() * (x - t_));
  }

  Box<D> bounding_box() const override {
    const Box<D> bb = base_->bounding_box();
    Box<D> out;
    // All corners of the base box, mapped forward.
    for (int mask = 0; mask < (1 << D); ++mask) {
      Vec<D> corner;
      for (int k = 0; k < D; ++k)
        corner[k] = (mask >> k) & 1 ? bb.hi[k] : bb.lo[k];
      out.absorb(r_ * corner + t_);
    }
    return out;
  }

 private:
  SdfPtr<D> base_;
  Vec<D> t_;
  Rot r_;
};

//! Intersection of inside-regions: pointwise max of children.
//! Gradient comes from the active child; ties go to the lowest index.
template <int D>
class IntersectionSdf final : public Sdf<D> {
 public:
  explicit IntersectionSdf(std::vector<SdfPtr<D>> children)
      : kids_(std::move(children)) {
    if (kids_.empty()) throw ConfigError("intersection: no children");
  }

  double value(const Vec<D>& x) const override {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& k : kids_) v = std::max(v, k->value(x));
    return v;
  }

  int active_child(const Vec<D>& x) const {
    int best = 0;
    double v = kids_[0]->value(x);
    for (std::size_t i = 1; i < kids_.size(); ++i) {
      const double vi = kids_[i]->value(x);
      if (vi > v) {
        v = vi;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  Vec<D> gradient(const Vec<D>& x) const override {
    return kids_[active_child(x)]->gradient(x);
  }

  Box<D> bounding_box() const override {
    Box<D> b = kids_[0]->bounding_box();
    for (std::size_t i = 1; i < kids_.size(); ++i)
      b = Box<D>::intersect(b, kids_[i]->bounding_box());
    return b;
  }

 private:
  std::vector<SdfPtr<D>> kids_;
};

//! Union of inside-regions: pointwise min of children.
template <int D>
class UnionSdf final : public Sdf<D> {
 public:
  explicit UnionSdf(std::vector<SdfPtr<D>> children)
      : kids_(std::move(children)) {
    if (kids_.empty()) throw ConfigError("union: no children");
  }

  double value(const Vec<D>& x) const override {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& k : kids_) v = std::min(v, k->value(x));
    return v;
  }

  Vec<D> gradient(const Vec<D>& x) const override {
    int best = 0;
    double v = kids_[0]->value(x);
    for (std::size_t i = 1; i < kids_.size(); ++i) {
      const double vi = kids_[i]->value(x);
      if (vi < v) {
        v = vi;
        best = static_cast<int>(i);
      }
    }
    return kids_[best]->gradient(x);
  }

  Box<D> bounding_box() const override {
    Box<D> b;
    for (const auto& k : kids_) {
      const Box<D> kb = k->bounding_box();
      b.absorb(kb.lo);
      b.absorb(kb.hi);
    }
    return b;
  }

 private:
  std::vector<SdfPtr<D>> kids_;
};

//! Complement: negated field (inside becomes outside).
template <int D>
class ComplementSdf final : public Sdf<D> {
 public:
  explicit ComplementSdf(SdfPtr<D> base) : base_(std::move(base)) {}

  double value(const Vec<D>& x) const override { return -base_->value(x); }
  Vec<D> gradient(const Vec<D>& x) const override {
    return -base_->gradient(x);
  }
  Box<D> bounding_box() const override {
    Box<D> b;
    b.lo = Vec<D>::Constant(-std::numeric_limits<double>::infinity());
    b.hi = Vec<D>::Constant(std::numeric_limits<double>::infinity());
    return b;
  }

 private:
  SdfPtr<D> base_;
};

}  // namespace fcm::geo
