#pragma once

#include <map>
#include <string>
#include <vector>

#include "fcm/harness/config.hpp"

namespace fcm::harness {

//! Exit codes: 0 success, 2 configuration error, 3 solver divergence,
//! 4 I/O failure.
struct RunOutcome {
  int exit_code = 0;
  std::string error_kind;     // "config" | "solver" | "io" when failed
  std::string error;
  std::vector<std::string> artifacts;        // files written
  std::map<std::string, double> metrics;     // benchmark summary values
};

//! Runs a case: `spec` is a built-in case name or a config file path.
//! Writes per-step CSV, VTK snapshots, and oracle-comparison CSV when the
//! case carries a benchmark; never throws (errors land in the outcome).
RunOutcome run_case(const std::string& spec, const CaseOverrides& overrides = {});

//! Runs the differentiable-estimation verification sweep and writes
//! verify_geometry.csv under `out_dir`. Returns the outcome with
//! per-case relative errors at the largest fiber count in `metrics`.
RunOutcome run_verify_geometry(std::uint64_t seed, const std::string& out_dir,
                               const std::vector<std::int64_t>& schedule = {
                                   1000, 10000, 100000});

}  // namespace fcm::harness
