#pragma once

#include <Eigen/SparseCholesky>

#include "fcm/fem/assembly.hpp"

namespace fcm::solvers {

//! Direct SPD factorization with a relative-residual contract of 1e-10.
class SpdSolver {
 public:
  void factor(const fem::SpMat& A) {
    a_ = A;
    ldlt_.compute(a_);
    if (ldlt_.info() != Eigen::Success)
      throw SolverError("linear solve: factorization failed (singular or "
                        "non-SPD matrix)");
    ok_ = true;
  }

  bool factored() const { return ok_; }
  void reset() { ok_ = false; }

  VecX solve(const VecX& b) const {
    if (!ok_) throw SolverError("linear solve: not factored");
    const VecX x = ldlt_.solve(b);
    const double bn = b.norm();
    if (bn > 0.0) {
      const double rel = (a_ * x - b).norm() / bn;
      if (!(rel <= 1e-10))
        throw SolverError("linear solve: residual " + std::to_string(rel) +
                          " exceeds 1e-10");
    }
    return x;
  }

 private:
  fem::SpMat a_;
  Eigen::SimplicialLDLT<fem::SpMat> ldlt_;
  bool ok_ = false;
};

inline VecX linear_solve(const fem::SpMat& A, const VecX& b) {
  SpdSolver s;
  s.factor(A);
  return s.solve(b);
}

}  // namespace fcm::solvers
