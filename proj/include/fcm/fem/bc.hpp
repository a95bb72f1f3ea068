#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "fcm/fem/mesh.hpp"

namespace fcm::fem {

//! Piecewise-linear scalar schedule over time (dynamics) or load fraction
//! (statics). Clamped outside the table range; empty table means 1.
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::vector<std::pair<double, double>> table)
      : t_(std::move(table)) {
    for (std::size_t i = 1; i < t_.size(); ++i)
      if (t_[i].first < t_[i - 1].first)
        throw ConfigError("schedule abscissae must be non-decreasing");
  }

  double operator()(double s) const {
    if (t_.empty()) return 1.0;
    if (s <= t_.front().first) return t_.front().second;
    if (s >= t_.back().first) return t_.back().second;
    for (std::size_t i = 1; i < t_.size(); ++i) {
      if (s <= t_[i].first) {
        const auto& [s0, v0] = t_[i - 1];
        const auto& [s1, v1] = t_[i];
        if (s1 == s0) return v1;
        return v0 + (v1 - v0) * (s - s0) / (s1 - s0);
      }
    }
    return t_.back().second;
  }

  //! Left-continuous slope, used for prescribed velocities.
  double rate(double s) const {
    if (t_.size() < 2) return 0.0;
    if (s <= t_.front().first || s > t_.back().first) return 0.0;
    for (std::size_t i = 1; i < t_.size(); ++i) {
      if (s <= t_[i].first) {
        const auto& [s0, v0] = t_[i - 1];
        const auto& [s1, v1] = t_[i];
        if (s1 == s0) return 0.0;
        return (v1 - v0) / (s1 - s0);
      }
    }
    return 0.0;
  }

  bool constant() const { return t_.size() < 2; }

 private:
  std::vector<std::pair<double, double>> t_;
};

struct BoundaryCondition {
  enum class Kind { Dirichlet, Traction, BodyForce };

  Kind kind = Kind::Dirichlet;
  std::string set;               // node set (Dirichlet) or facet set (traction)
  std::array<bool, 3> mask = {true, true, true};  // Dirichlet components
  Vec3 vector = Vec3::Zero();    // target value / traction / force per volume
  Schedule schedule;             // scalar multiplier

  static BoundaryCondition dirichlet(std::string set, std::array<bool, 3> mask,
                                     const Vec3& value, Schedule sched = {}) {
    BoundaryCondition bc;
    bc.kind = Kind::Dirichlet;
    bc.set = std::move(set);
    bc.mask = mask;
    bc.vector = value;
    bc.schedule = std::move(sched);
    return bc;
  }

  static BoundaryCondition traction(std::string facet_set, const Vec3& t,
                                    Schedule sched = {}) {
    BoundaryCondition bc;
    bc.kind = Kind::Traction;
    bc.set = std::move(facet_set);
    bc.vector = t;
    bc.schedule = std::move(sched);
    return bc;
  }

  static BoundaryCondition body_force(const Vec3& f, Schedule sched = {}) {
    BoundaryCondition bc;
    bc.kind = Kind::BodyForce;
    bc.vector = f;
    bc.schedule = std::move(sched);
    return bc;
  }
};

//! One resolved Dirichlet constraint: dof index, value, and rate.
struct DirichletEntry {
  int dof;
  double value;
  double rate;
};

//! Resolves Dirichlet constraints at schedule parameter s. Later conditions
//! override earlier ones on the same dof.
template <int D>
std::vector<DirichletEntry> dirichlet_at(const Mesh<D>& mesh,
                                         const std::vector<BoundaryCondition>& bcs,
                                         double s);

//! Checks that traction facets are not fully Dirichlet-constrained in a
//! component the traction loads (the boundary regions must be disjoint).
template <int D>
void validate_bcs(const Mesh<D>& mesh,
                  const std::vector<BoundaryCondition>& bcs);

}  // namespace fcm::fem
