#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fcm/solvers/dynamics.hpp"
#include "fcm/solvers/statics.hpp"

namespace fcm::harness {

struct OutputConfig {
  std::string directory = "out";
  std::string prefix = "case";
  int vtk_every = 0;  // 0: final snapshot only; n > 0: every n records/steps
};

//! Benchmark hook: selects oracle post-processing and carries its
//! parameters (SI units).
struct BenchmarkConfig {
  std::string kind = "none";
  std::map<std::string, double> params;

  double param(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end())
      throw ConfigError("benchmark parameter '" + key + "' missing");
    return it->second;
  }
};

//! A case resolved to runnable form: meshes built, system wired, solver
//! and output settings validated. Movable, not copyable (the system keeps
//! pointers into the owned meshes).
template <int D>
struct ResolvedCase {
  std::string name;
  std::vector<std::unique_ptr<fem::Mesh<D>>> meshes;
  solvers::System<D> system;
  bool dynamic = false;
  solvers::DynamicsConfig dyn;
  solvers::StaticsConfig stat;
  OutputConfig output;
  BenchmarkConfig benchmark;
};

//! Spatial dimension declared by a case file (schema-validated).
int case_dim(const std::string& json_text);

//! Parses and resolves a case description (see README for the schema).
//! The mandatory schema string is "fcm-case/1".
template <int D>
ResolvedCase<D> load_case(const std::string& json_text);

//! Command-line overrides applied after parsing.
struct CaseOverrides {
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool has_fibers = false;
  std::int64_t fibers = 0;
  bool has_out = false;
  std::string out;
};

template <int D>
void apply_overrides(ResolvedCase<D>& c, const CaseOverrides& o);

}  // namespace fcm::harness
