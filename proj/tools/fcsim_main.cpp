#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "fcm/harness/cases.hpp"
#include "fcm/harness/run.hpp"

namespace {

int report(const fcm::harness::RunOutcome& outcome) {
  if (outcome.exit_code != 0) {
    std::cerr << "error: code=" << outcome.exit_code
              << " kind=" << outcome.error_kind << " message=\""
              << outcome.error << "\"\n";
    return outcome.exit_code;
  }
  for (const auto& a : outcome.artifacts) std::cout << "wrote " << a << "\n";
  for (const auto& [key, value] : outcome.metrics)
    std::printf("%-28s %.8g\n", key.c_str(), value);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume-energy contact simulator"};
  app.require_subcommand(1);

  std::string spec;
  fcm::harness::CaseOverrides overrides;
  std::uint64_t seed = 0;
  std::int64_t fibers = 0;
  std::string out_dir;

  auto* run = app.add_subcommand(
      "run", "Run a case from a config file or built-in name");
  run->add_option("config", spec, "Config path or built-in case name")
      ->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override the master seed");
  auto* fib_opt =
      run->add_option("--fibers", fibers, "Override the fiber count");
  auto* out_opt =
      run->add_option("--out", out_dir, "Override the output directory");

  std::uint64_t vseed = 1;
  std::string vout = "out/verify";
  auto* verify = app.add_subcommand(
      "verify-geometry",
      "Run the differentiable overlap-estimation verification suite");
  verify->add_option("--seed", vseed, "Master seed");
  verify->add_option("--out", vout, "Output directory");

  auto* list = app.add_subcommand("list-cases", "List built-in cases");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& name : fcm::harness::builtin_case_names())
      std::cout << name << "\n";
    return 0;
  }
  if (verify->parsed())
    return report(fcm::harness::run_verify_geometry(vseed, vout));

  overrides.has_seed = seed_opt->count() > 0;
  overrides.seed = seed;
  overrides.has_fibers = fib_opt->count() > 0;
  overrides.fibers = fibers;
  overrides.has_out = out_opt->count() > 0;
  overrides.out = out_dir;
  return report(fcm::harness::run_case(spec, overrides));
}
