#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace fcm {

template <int D>
using Vec = Eigen::Matrix<double, D, 1>;

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

//! Configuration / input validation failure (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

//! Solver blow-up or non-convergence (CLI exit code 3).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

//! Filesystem / serialization failure (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

//! Axis-aligned box. Degenerate (lo > hi on any axis) means empty.
template <int D>
struct Box {
  Vec<D> lo = Vec<D>::Constant(std::numeric_limits<double>::infinity());
  Vec<D> hi = Vec<D>::Constant(-std::numeric_limits<double>::infinity());

  bool empty() const {
    for (int k = 0; k < D; ++k)
      if (lo[k] > hi[k]) return true;
    return false;
  }

  double measure() const {
    if (empty()) return 0.0;
    double m = 1.0;
    for (int k = 0; k < D; ++k) m *= hi[k] - lo[k];
    return m;
  }

  Vec<D> extent() const { return hi - lo; }

  void absorb(const Vec<D>& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }

  bool contains(const Vec<D>& p) const {
    for (int k = 0; k < D; ++k)
      if (p[k] < lo[k] || p[k] > hi[k]) return false;
    return true;
  }

  Box inflated(double margin) const {
    Box b;
    b.lo = lo.array() - margin;
    b.hi = hi.array() + margin;
    return b;
  }

  static Box intersect(const Box& a, const Box& b) {
    Box r;
    r.lo = a.lo.cwiseMax(b.lo);
    r.hi = a.hi.cwiseMin(b.hi);
    return r;
  }
};

using Box2 = Box<2>;
using Box3 = Box<3>;

}  // namespace fcm
