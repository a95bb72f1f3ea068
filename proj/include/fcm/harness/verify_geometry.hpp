#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fcm/types.hpp"

namespace fcm::harness {

//! One row of the differentiable-estimation verification report: a case at
//! one fiber count, with the estimate and its independent reference
//! (closed form, exact clipping, or quadrature of a closed-form slice).
struct VerificationRow {
  std::string case_name;
  std::int64_t fibers = 0;
  double value = 0.0, value_ref = 0.0, value_relerr = 0.0;
  double grad = 0.0, grad_ref = 0.0, grad_relerr = 0.0;
};

//! Runs circle, semicircle-block, translating-squares, sphere, cone-cube,
//! and rotating-cube sweeps over the fiber-count schedule.
std::vector<VerificationRow> geometry_verification_cases(
    std::uint64_t seed, const std::vector<std::int64_t>& schedule);

}  // namespace fcm::harness
