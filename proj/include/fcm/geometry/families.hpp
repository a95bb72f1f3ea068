#pragma once

#include <memory>
#include <vector>

#include "fcm/geometry/sdf.hpp"

namespace fcm::geo {

//! A one-parameter family of implicit fields g(theta, x) with analytic
//! parameter sensitivity dg/dtheta at fixed x. Stateless: theta is passed
//! per call, so frozen-batch sweeps and finite-difference probes are cheap.
template <int D>
class ParamSdfFamily {
 public:
  virtual ~ParamSdfFamily() = default;
  virtual double value(double theta, const Vec<D>& x) const = 0;
  virtual Vec<D> gradient(double theta, const Vec<D>& x) const = 0;
  virtual double theta_derivative(double theta, const Vec<D>& x) const = 0;
};

template <int D>
using FamilyPtr = std::shared_ptr<const ParamSdfFamily<D>>;

//! Fixed shape: no theta dependence.
template <int D>
class FixedFamily final : public ParamSdfFamily<D> {
 public:
  explicit FixedFamily(SdfPtr<D> shape) : s_(std::move(shape)) {}
  double value(double, const Vec<D>& x) const override { return s_->value(x); }
  Vec<D> gradient(double, const Vec<D>& x) const override {
    return s_->gradient(x);
  }
  double theta_derivative(double, const Vec<D>&) const override { return 0.0; }

 private:
  SdfPtr<D> s_;
};

//! Disk/sphere whose radius is theta: g = |x - c| - theta.
template <int D>
class RadiusFamily final : public ParamSdfFamily<D> {
 public:
  explicit RadiusFamily(const Vec<D>& center) : c_(center) {}

  double value(double theta, const Vec<D>& x) const override {
    return (x - c_).norm() - theta;
  }
  Vec<D> gradient(double, const Vec<D>& x) const override {
    const Vec<D> d = x - c_;
    const double n = d.norm();
    return n == 0.0 ? Vec<D>::Unit(0) : Vec<D>(d / n);
  }
  double theta_derivative(double, const Vec<D>&) const override { return -1.0; }

 private:
  Vec<D> c_;
};

//! Base shape translated by theta * dir: g(theta, x) = g0(x - theta dir).
template <int D>
class TranslationFamily final : public ParamSdfFamily<D> {
 public:
  TranslationFamily(SdfPtr<D> base, const Vec<D>& dir)
      : s_(std::move(base)), dir_(dir) {}

  double value(double theta, const Vec<D>& x) const override {
    return s_->value(x - theta * dir_);
  }
  Vec<D> gradient(double theta, const Vec<D>& x) const override {
    return s_->gradient(x - theta * dir_);
  }
  double theta_derivative(double theta, const Vec<D>& x) const override {
    return -s_->gradient(x - theta * dir_).dot(dir_);
  }

 private:
  SdfPtr<D> s_;
  Vec<D> dir_;
};

//! Base shape rotated by theta. 2D: rotation in the plane. 3D: rotation
//! about a unit axis through the origin. g(theta, x) = g0(R(-theta) x),
//! dg/dtheta = -grad g0(y) . (axis x y) with y = R(-theta) x.
template <int D>
class RotationFamily final : public ParamSdfFamily<D> {
 public:
  // 2D constructor.
  explicit RotationFamily(SdfPtr<D> base)
    requires(D == 2)
      : s_(std::move(base)) {}

  // 3D constructor.
  RotationFamily(SdfPtr<D> base, const Vec<3>& axis)
    requires(D == 3)
      : s_(std::move(base)), axis_(axis.normalized()) {}

  double value(double theta, const Vec<D>& x) const override {
    return s_->value(unrotate(theta, x));
  }

  Vec<D> gradient(double theta, const Vec<D>& x) const override {
    return rotate_vec(theta, s_->gradient(unrotate(theta, x)));
  }

  double theta_derivative(double theta, const Vec<D>& x) const override {
    const Vec<D> y = unrotate(theta, x);
    const Vec<D> g = s_->gradient(y);
    if constexpr (D == 2) {
      // axis x y in-plane: perp(y) = (-y1, y0)
      return -(g.x() * (-y.y()) + g.y() * y.x());
    } else {
      return -g.dot(axis_.cross(y));
    }
  }

 private:
  Vec<D> unrotate(double theta, const Vec<D>& x) const {
    if constexpr (D == 2) {
      const double c = std::cos(theta), s = std::sin(theta);
      return Vec<D>(c * x.x() + s * x.y(), -s * x.x() + c * x.y());
    } else {
      return Eigen::AngleAxisd(-theta, axis_) * x;
    }
  }

  Vec<D> rotate_vec(double theta, const Vec<D>& v) const {
    if constexpr (D == 2) {
      const double c = std::cos(theta), s = std::sin(theta);
      return Vec<D>(c * v.x() - s * v.y(), s * v.x() + c * v.y());
    } else {
      return Eigen::AngleAxisd(theta, axis_) * v;
    }
  }

  SdfPtr<D> s_;
  Vec<3> axis_ = Vec<3>::UnitZ();
};

//! Pointwise max of two families (intersection of insides); the active
//! child carries the sensitivity, ties resolve to the first child.
template <int D>
class MaxFamily final : public ParamSdfFamily<D> {
 public:
  MaxFamily(FamilyPtr<D> a, FamilyPtr<D> b)
      : a_(std::move(a)), b_(std::move(b)) {}

  double value(double theta, const Vec<D>& x) const override {
    return std::max(a_->value(theta, x), b_->value(theta, x));
  }
  Vec<D> gradient(double theta, const Vec<D>& x) const override {
    return a_->value(theta, x) >= b_->value(theta, x) ? a_->gradient(theta, x)
                                                      : b_->gradient(theta, x);
  }
  double theta_derivative(double theta, const Vec<D>& x) const override {
    return a_->value(theta, x) >= b_->value(theta, x)
               ? a_->theta_derivative(theta, x)
               : b_->theta_derivative(theta, x);
  }

 private:
  FamilyPtr<D> a_, b_;
};

//! Pointwise min of two families (union of insides).
template <int D>
class MinFamily final : public ParamSdfFamily<D> {
 public:
  MinFamily(FamilyPtr<D> a, FamilyPtr<D> b)
      : a_(std::move(a)), b_(std::move(b)) {}

  double value(double theta, const Vec<D>& x) const override {
    return std::min(a_->value(theta, x), b_->value(theta, x));
  }
  Vec<D> gradient(double theta, const Vec<D>& x) const override {
    return a_->value(theta, x) <= b_->value(theta, x) ? a_->gradient(theta, x)
                                                      : b_->gradient(theta, x);
  }
  double theta_derivative(double theta, const Vec<D>& x) const override {
    return a_->value(theta, x) <= b_->value(theta, x)
               ? a_->theta_derivative(theta, x)
               : b_->theta_derivative(theta, x);
  }

 private:
  FamilyPtr<D> a_, b_;
};

//! Adapter exposing a family at fixed theta through the plain Sdf surface.
template <int D>
class FamilyAtTheta final : public Sdf<D> {
 public:
  FamilyAtTheta(FamilyPtr<D> family, double theta, Box<D> bbox)
      : owned_(std::move(family)), f_(owned_.get()), theta_(theta),
        bbox_(bbox) {}

  //! Non-owning view; the family must outlive the adapter.
  FamilyAtTheta(const ParamSdfFamily<D>* family, double theta, Box<D> bbox)
      : f_(family), theta_(theta), bbox_(bbox) {}

  double value(const Vec<D>& x) const override { return f_->value(theta_, x); }
  Vec<D> gradient(const Vec<D>& x) const override {
    return f_->gradient(theta_, x);
  }
  Box<D> bounding_box() const override { return bbox_; }

 private:
  FamilyPtr<D> owned_;
  const ParamSdfFamily<D>* f_;
  double theta_;
  Box<D> bbox_;
};

}  // namespace fcm::geo
