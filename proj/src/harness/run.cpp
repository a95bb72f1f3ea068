#include "fcm/harness/run.hpp"

#include <filesystem>
#include <fstream>

#include "fcm/harness/cases.hpp"
#include "fcm/harness/oracles.hpp"
#include "fcm/harness/verify_geometry.hpp"
#include "fcm/io/csv.hpp"
#include "fcm/io/vtk.hpp"

namespace fcm::harness {

namespace {

namespace fs = std::filesystem;

//! Deformed tributary boundary measure per node (the row sum of the
//! boundary mass matrix): pressure = nodal force / tributary measure.
template <int D>
std::vector<double> tributary_measures(const fem::Mesh<D>& mesh,
                                       const VecX& d) {
  std::vector<double> trib(mesh.n_nodes(), 0.0);
  for (const auto& f : mesh.facets) {
    const double share = mesh.facet_measure_deformed(f, d) / D;
    for (int k = 0; k < D; ++k) trib[f[k]] += share;
  }
  return trib;
}

template <int D>
Vec<D> net_force(const fem::Mesh<D>& mesh, const VecX& f) {
  Vec<D> net = Vec<D>::Zero();
  for (int n = 0; n < mesh.n_nodes(); ++n)
    for (int k = 0; k < D; ++k) net[k] += f[fem::Mesh<D>::dof(n, k)];
  return net;
}

struct ProfilePoint {
  double abscissa;
  double pressure;
  int node;
};

//! Nodes carrying contact force, as (abscissa, |force component| /
//! tributary measure), sorted by abscissa.
template <int D>
std::vector<ProfilePoint> pressure_profile(
    const fem::Mesh<D>& mesh, const VecX& d, const VecX& f_cont, int component,
    const std::function<double(const Vec<D>&)>& abscissa) {
  const auto trib = tributary_measures(mesh, d);
  double fmax = 0.0;
  for (int n = 0; n < mesh.n_nodes(); ++n)
    fmax = std::max(fmax,
                    std::abs(f_cont[fem::Mesh<D>::dof(n, component)]));
  std::vector<ProfilePoint> pts;
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const double fn = f_cont[fem::Mesh<D>::dof(n, component)];
    if (std::abs(fn) <= 1e-9 * fmax || trib[n] <= 0.0) continue;
    pts.push_back({abscissa(mesh.deformed_node(n, d)), std::abs(fn) / trib[n],
                   n});
  }
  std::sort(pts.begin(), pts.end(),
            [](const ProfilePoint& a, const ProfilePoint& b) {
              return a.abscissa < b.abscissa;
            });
  return pts;
}

double interp_curve(const OracleCurve& c, double x) {
  if (c.xs.empty()) return 0.0;
  if (x <= c.xs.front()) return c.ys.front();
  if (x >= c.xs.back()) return c.ys.back();
  const auto it = std::lower_bound(c.xs.begin(), c.xs.end(), x);
  const std::size_t i = it - c.xs.begin();
  const double x0 = c.xs[i - 1], x1 = c.xs[i];
  const double t = x1 == x0 ? 0.0 : (x - x0) / (x1 - x0);
  return c.ys[i - 1] + t * (c.ys[i] - c.ys[i - 1]);
}

//! Context shared by the per-benchmark post-processing hooks.
template <int D>
struct RunContext {
  const ResolvedCase<D>* cfg;
  RunOutcome* outcome;
  std::string dir;

  std::string path(const std::string& file) const {
    const std::string p = dir + "/" + file;
    outcome->artifacts.push_back(p);
    return p;
  }
};

// ---------------------------------------------------------------------------
// Static and dynamic drivers
// ---------------------------------------------------------------------------

template <int D>
void write_body_vtk(const RunContext<D>& ctx, const std::string& tag,
                    const std::vector<VecX>& d, const std::vector<VecX>* v) {
  for (std::size_t i = 0; i < ctx.cfg->system.bodies.size(); ++i) {
    const auto& b = ctx.cfg->system.bodies[i];
    const VecX vel = v ? (*v)[i] : VecX::Zero(b.mesh->n_dofs());
    io::write_vtk<D>(
        ctx.path(ctx.cfg->output.prefix + "_" + b.name + "_" + tag + ".vtk"),
        *b.mesh, d[i], vel, fem::recover_stress(*b.mesh, b.material, d[i]),
        ctx.cfg->name + " " + b.name);
  }
}

template <int D>
std::vector<solvers::LoadStepResult<D>> drive_static(RunContext<D>& ctx) {
  const auto& cfg = *ctx.cfg;
  solvers::StaticSolver<D> solver(cfg.system, cfg.stat);

  std::vector<std::string> cols = {"step", "load_fraction", "overlap_volume",
                                   "contact_energy", "outer_iterations"};
  for (const auto& b : cfg.system.bodies) {
    for (const char* c : {"cfx", "cfy", "cfz"})
      cols.push_back(b.name + "_" + c);
    for (const char* c : {"rfx", "rfy", "rfz"})
      cols.push_back(b.name + "_" + c);
  }
  io::CsvWriter csv(ctx.path(cfg.output.prefix + "_steps.csv"), cols);

  int step = 0;
  const auto results = solver.solve([&](const solvers::LoadStepResult<D>& r) {
    ++step;
    std::vector<double> row = {static_cast<double>(step), r.load_fraction,
                               r.overlap_volume, r.contact_energy,
                               static_cast<double>(r.outer_iterations)};
    for (std::size_t i = 0; i < cfg.system.bodies.size(); ++i) {
      const Vec<D> cf = net_force(*cfg.system.bodies[i].mesh, r.f_cont[i]);
      for (int k = 0; k < 3; ++k) row.push_back(k < D ? cf[k] : 0.0);
      for (int k = 0; k < 3; ++k) row.push_back(r.reaction_force[i][k]);
    }
    csv.row(row);
    if (cfg.output.vtk_every > 0 && step % cfg.output.vtk_every == 0)
      write_body_vtk(ctx, "step" + std::to_string(step), r.d, nullptr);
  });
  write_body_vtk(ctx, "final", results.back().d, nullptr);
  return results;
}

template <int D>
std::vector<solvers::EnergyRecord> drive_dynamic(RunContext<D>& ctx) {
  const auto& cfg = *ctx.cfg;
  solvers::DynamicSolver<D> solver(cfg.system, cfg.dyn);

  std::vector<std::string> cols = {"step",  "time",          "kinetic",
                                   "strain", "contact_energy", "total",
                                   "total_drift", "overlap_volume"};
  for (const auto& b : cfg.system.bodies) {
    for (const char* c : {"cfx", "cfy", "cfz"})
      cols.push_back(b.name + "_" + c);
    for (const char* c : {"rfx", "rfy", "rfz"})
      cols.push_back(b.name + "_" + c);
  }
  io::CsvWriter csv(ctx.path(cfg.output.prefix + "_energy.csv"), cols);

  double e0 = -1.0;
  int emitted = 0;
  const auto records = solver.run([&](const solvers::EnergyRecord& r) {
    if (e0 < 0.0) e0 = r.total;
    std::vector<double> row = {static_cast<double>(r.step), r.t,
                               r.kinetic,  r.strain,
                               r.contact,  r.total,
                               e0 > 0 ? (r.total - e0) / e0 : 0.0,
                               r.overlap_volume};
    for (std::size_t i = 0; i < cfg.system.bodies.size(); ++i) {
      for (int k = 0; k < 3; ++k) row.push_back(r.contact_force[i][k]);
      for (int k = 0; k < 3; ++k) row.push_back(r.reaction_force[i][k]);
    }
    csv.row(row);
    ++emitted;
    if (cfg.output.vtk_every > 0 && emitted % cfg.output.vtk_every == 0)
      write_body_vtk(ctx, "rec" + std::to_string(emitted),
                     solver.displacements(), &solver.velocities());
  });
  write_body_vtk(ctx, "final", solver.displacements(), &solver.velocities());
  return records;
}

// ---------------------------------------------------------------------------
// Benchmark post-processing
// ---------------------------------------------------------------------------

template <int D>
void postprocess_static(RunContext<D>& ctx,
                        const std::vector<solvers::LoadStepResult<D>>& steps);
template <int D>
void postprocess_dynamic(RunContext<D>& ctx,
                         const std::vector<solvers::EnergyRecord>& recs);

template <>
void postprocess_static<2>(RunContext<2>& ctx,
                           const std::vector<solvers::LoadStepResult<2>>& steps) {
  const auto& cfg = *ctx.cfg;
  const auto& bm = cfg.benchmark;
  auto& metrics = ctx.outcome->metrics;
  const auto& last = steps.back();

  if (bm.kind == "hertz") {
    const auto oracle = hertz_oracle(bm.param("pressure"), bm.param("radius"),
                                     bm.param("E"), bm.param("nu"));
    const auto& mesh = *cfg.system.bodies[0].mesh;
    const auto prof = pressure_profile<2>(
        mesh, last.d[0], last.f_cont[0], 1,
        [](const Vec2& x) { return x.x(); });
    io::CsvWriter csv(ctx.path("hertz_pressure.csv"),
                      {"x", "p_numeric", "p_oracle"});
    double peak = 0.0;
    for (const auto& pt : prof) {
      csv.row({pt.abscissa, pt.pressure,
               interp_curve(oracle.curve("pressure"), pt.abscissa)});
      peak = std::max(peak, pt.pressure);
    }
    double half_width = 0.0;
    for (const auto& pt : prof)
      if (pt.pressure >= 0.05 * peak)
        half_width = std::max(half_width, std::abs(pt.abscissa));
    metrics["peak_pressure"] = peak;
    metrics["peak_pressure_ref"] = oracle.scalar("peak_pressure");
    metrics["half_width"] = half_width;
    metrics["half_width_ref"] = oracle.scalar("half_width");
    metrics["contact_force_y"] =
        std::abs(net_force(mesh, last.f_cont[0]).y());
    metrics["total_load_ref"] = oracle.scalar("total_load");
  } else if (bm.kind == "wedge") {
    const double beta = bm.param("beta_deg") * kPi / 180.0;
    const double estar = bm.param("E") / (1.0 - bm.param("nu") * bm.param("nu"));
    const auto& mesh = *cfg.system.bodies[0].mesh;
    const double force = std::abs(net_force(mesh, last.f_cont[0]).x());
    const double a_num = force / (estar * std::tan(beta));
    metrics["total_force"] = force;
    metrics["half_width_from_force"] = a_num;

    const auto oracle = wedge_oracle(std::max(a_num, 1e-12), bm.param("E"),
                                     bm.param("nu"), beta);
    const auto prof = pressure_profile<2>(
        mesh, last.d[0], last.f_cont[0], 0,
        [](const Vec2& x) { return x.y(); });
    // Geometric contact half-width: extent of the contact zone carrying
    // more than 5% of the peak nodal pressure.
    double peak = 0.0, a_geom = 0.0;
    for (const auto& pt : prof) peak = std::max(peak, pt.pressure);
    for (const auto& pt : prof)
      if (pt.pressure >= 0.05 * peak)
        a_geom = std::max(a_geom, std::abs(pt.abscissa));
    metrics["half_width_geometric"] = a_geom;
    metrics["force_from_geometric_width"] = estar * std::tan(beta) * a_geom;
    io::CsvWriter csv(ctx.path("wedge_pressure.csv"),
                      {"x", "p_numeric", "p_oracle"});
    for (const auto& pt : prof)
      csv.row({pt.abscissa, pt.pressure,
               interp_curve(oracle.curve("pressure"), pt.abscissa)});

    // Deformed left-face profile: gap from the wedge apex plane (x = 0),
    // abscissa along the face. The root-mean-square deviation is taken
    // inside |y| <= 2a against the two-branch reference.
    io::CsvWriter pcsv(ctx.path("wedge_profile.csv"),
                       {"x", "h_numeric", "h_oracle"});
    double rms = 0.0;
    int count = 0;
    for (int n : mesh.node_set("left")) {
      const Vec2 x = mesh.deformed_node(n, last.d[0]);
      const double h_num = x.x();
      const double h_ref = interp_curve(oracle.curve("profile"), x.y());
      pcsv.row({x.y(), h_num, h_ref});
      if (std::abs(x.y()) <= 2.0 * a_num) {
        rms += (h_num - h_ref) * (h_num - h_ref);
        ++count;
      }
    }
    metrics["profile_rms"] = count ? std::sqrt(rms / count) : 0.0;
    metrics["profile_scale"] = a_num * std::tan(beta);
  } else if (bm.kind == "punch") {
    const auto& mesh = *cfg.system.bodies[0].mesh;
    const auto prof = pressure_profile<2>(
        mesh, last.d[0], last.f_cont[0], 1,
        [](const Vec2& x) { return x.x(); });
    io::CsvWriter csv(ctx.path("punch_pressure.csv"), {"x", "p_numeric"});
    for (const auto& pt : prof) csv.row({pt.abscissa, pt.pressure});
    metrics["contact_force_y"] =
        std::abs(net_force(mesh, last.f_cont[0]).y());
  } else if (bm.kind == "ironing") {
    io::CsvWriter csv(ctx.path("ironing_reactions.csv"),
                      {"step", "load_fraction", "rx", "ry"});
    double max_step_jump = 0.0;
    double prev_ry = 0.0;
    for (std::size_t s = 0; s < steps.size(); ++s) {
      const double ry = steps[s].reaction_force[1][1];
      csv.row({static_cast<double>(s + 1), steps[s].load_fraction,
               steps[s].reaction_force[1][0], ry});
      if (s > 8)  // compare within the sliding phase
        max_step_jump = std::max(max_step_jump, std::abs(ry - prev_ry));
      prev_ry = ry;
    }
    metrics["max_sliding_reaction_jump"] = max_step_jump;
    metrics["final_ry"] = steps.back().reaction_force[1][1];
  }

  metrics["overlap_volume"] = last.overlap_volume;
  metrics["outer_iterations"] = last.outer_iterations;
}

template <>
void postprocess_static<3>(RunContext<3>& ctx,
                           const std::vector<solvers::LoadStepResult<3>>& steps) {
  const auto& cfg = *ctx.cfg;
  const auto& bm = cfg.benchmark;
  auto& metrics = ctx.outcome->metrics;
  const auto& last = steps.back();

  if (bm.kind == "cone") {
    const double beta = bm.param("beta_deg") * kPi / 180.0;
    const double depth = bm.param("uz");
    const double a_ref = 2.0 * depth / (kPi * std::tan(beta));
    const auto oracle = cone_oracle(a_ref, bm.param("E"), bm.param("nu"), beta);
    const auto& mesh = *cfg.system.bodies[0].mesh;
    const double force = std::abs(net_force(mesh, last.f_cont[0]).z());
    metrics["normal_force"] = force;
    metrics["normal_force_ref"] = oracle.scalar("normal_force");

    const auto prof = pressure_profile<3>(
        mesh, last.d[0], last.f_cont[0], 2,
        [](const Vec3& x) { return std::hypot(x.x(), x.y()); });
    io::CsvWriter csv(ctx.path("cone_pressure.csv"),
                      {"r", "p_numeric", "p_oracle"});
    for (const auto& pt : prof)
      csv.row({pt.abscissa, pt.pressure,
               interp_curve(oracle.curve("pressure"), pt.abscissa)});
  }
  metrics["overlap_volume"] = last.overlap_volume;
  metrics["outer_iterations"] = last.outer_iterations;
}

template <int D>
void postprocess_dynamic_common(RunContext<D>& ctx,
                                const std::vector<solvers::EnergyRecord>& recs) {
  auto& metrics = ctx.outcome->metrics;
  const double e0 = recs.front().total;
  double max_drift = 0.0, vc_end = recs.back().overlap_volume;
  for (const auto& r : recs)
    if (e0 > 0) max_drift = std::max(max_drift, std::abs(r.total - e0) / e0);
  metrics["max_energy_drift"] = max_drift;
  metrics["final_overlap_volume"] = vc_end;
}

template <>
void postprocess_dynamic<2>(RunContext<2>& ctx,
                            const std::vector<solvers::EnergyRecord>& recs) {
  const auto& cfg = *ctx.cfg;
  const auto& bm = cfg.benchmark;
  auto& metrics = ctx.outcome->metrics;
  postprocess_dynamic_common(ctx, recs);

  if (bm.kind == "bar1d") {
    const auto oracle =
        bar_impact_oracle(bm.param("L"), bm.param("E"), bm.param("rho"),
                          bm.param("v0"), bm.param("h0"));
    const double width = bm.param("width");
    io::CsvWriter csv(ctx.path("bar_pressure.csv"),
                      {"time", "p_numeric", "p_oracle"});
    const double plateau = oracle.scalar("plateau_pressure");
    double first_contact = -1.0, last_contact = -1.0;
    double mean_p = 0.0;
    int n_contact = 0;
    for (const auto& r : recs) {
      const double p_num = std::abs(r.contact_force[0].y()) / width;
      csv.row({r.t, p_num, interp_curve(oracle.curve("pressure"), r.t)});
      if (r.overlap_volume > 0.0 || p_num > 0.0) {
        if (first_contact < 0.0) first_contact = r.t;
        last_contact = r.t;
      }
    }
    // Mean pressure across the contact phase (inclusive of chatter gaps).
    for (const auto& r : recs) {
      if (first_contact >= 0.0 && r.t >= first_contact &&
          r.t <= last_contact) {
        mean_p += std::abs(r.contact_force[0].y()) / width;
        ++n_contact;
      }
    }
    metrics["mean_contact_pressure"] = n_contact ? mean_p / n_contact : 0.0;
    metrics["plateau_ref"] = plateau;
    metrics["contact_duration"] =
        first_contact >= 0.0 ? last_contact - first_contact : 0.0;
    metrics["contact_duration_ref"] = oracle.scalar("contact_duration");
    metrics["impact_time_ref"] = oracle.scalar("impact_time");
  } else if (bm.kind == "diamond" || bm.kind == "star") {
    double peak_force = 0.0;
    for (const auto& r : recs)
      peak_force = std::max(peak_force, std::abs(r.contact_force[0].y()));
    metrics["peak_contact_force"] = peak_force;
    // Reciprocity over records with active contact.
    double worst = 0.0;
    for (const auto& r : recs) {
      const double f1 = r.contact_force[0].norm(), f2 = r.contact_force[1].norm();
      const double fmax = std::max(f1, f2);
      if (fmax > 0.05 * peak_force && peak_force > 0)
        worst = std::max(worst,
                         (r.contact_force[0] + r.contact_force[1]).norm() / fmax);
    }
    metrics["worst_reciprocity"] = worst;
  }
}

template <>
void postprocess_dynamic<3>(RunContext<3>& ctx,
                            const std::vector<solvers::EnergyRecord>& recs) {
  postprocess_dynamic_common(ctx, recs);
}

// ---------------------------------------------------------------------------

template <int D>
void run_resolved(ResolvedCase<D>& cfg, const CaseOverrides& overrides,
                  RunOutcome& outcome) {
  apply_overrides(cfg, overrides);
  std::error_code ec;
  fs::create_directories(cfg.output.directory, ec);
  if (ec)
    throw IoError("cannot create output directory '" + cfg.output.directory +
                  "': " + ec.message());
  RunContext<D> ctx{&cfg, &outcome, cfg.output.directory};
  if (cfg.dynamic) {
    const auto recs = drive_dynamic(ctx);
    postprocess_dynamic<D>(ctx, recs);
  } else {
    const auto steps = drive_static(ctx);
    postprocess_static<D>(ctx, steps);
  }
}

}  // namespace

RunOutcome run_case(const std::string& spec, const CaseOverrides& overrides) {
  RunOutcome outcome;
  try {
    std::string text;
    if (is_builtin_case(spec)) {
      text = builtin_case_json(spec);
    } else {
      std::ifstream in(spec);
      if (!in)
        throw ConfigError("config '" + spec +
                          "' is neither a built-in case nor a readable file");
      text.assign(std::istreambuf_iterator<char>(in),
                  std::istreambuf_iterator<char>());
    }
    const int dim = case_dim(text);
    if (dim == 2) {
      auto cfg = load_case<2>(text);
      run_resolved<2>(cfg, overrides, outcome);
    } else {
      auto cfg = load_case<3>(text);
      run_resolved<3>(cfg, overrides, outcome);
    }
  } catch (const ConfigError& e) {
    outcome.exit_code = 2;
    outcome.error_kind = "config";
    outcome.error = e.what();
  } catch (const SolverError& e) {
    outcome.exit_code = 3;
    outcome.error_kind = "solver";
    outcome.error = e.what();
  } catch (const IoError& e) {
    outcome.exit_code = 4;
    outcome.error_kind = "io";
    outcome.error = e.what();
  }
  return outcome;
}

RunOutcome run_verify_geometry(std::uint64_t seed, const std::string& out_dir,
                               const std::vector<std::int64_t>& schedule) {
  RunOutcome outcome;
  try {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
      throw IoError("cannot create output directory '" + out_dir +
                    "': " + ec.message());
    const auto rows = geometry_verification_cases(seed, schedule);
    const std::string path = out_dir + "/verify_geometry.csv";
    outcome.artifacts.push_back(path);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "'");
    out << "case,fibers,value,value_ref,value_relerr,grad,grad_ref,"
           "grad_relerr\n";
    for (const auto& r : rows) {
      out << r.case_name << "," << r.fibers << ","
          << io::CsvWriter::format(r.value) << ","
          << io::CsvWriter::format(r.value_ref) << ","
          << io::CsvWriter::format(r.value_relerr) << ","
          << io::CsvWriter::format(r.grad) << ","
          << io::CsvWriter::format(r.grad_ref) << ","
          << io::CsvWriter::format(r.grad_relerr) << "\n";
      if (r.fibers == schedule.back()) {
        outcome.metrics[r.case_name + "_value_relerr"] = r.value_relerr;
        outcome.metrics[r.case_name + "_grad_relerr"] = r.grad_relerr;
      }
    }
  } catch (const ConfigError& e) {
    outcome.exit_code = 2;
    outcome.error_kind = "config";
    outcome.error = e.what();
  } catch (const IoError& e) {
    outcome.exit_code = 4;
    outcome.error_kind = "io";
    outcome.error = e.what();
  }
  return outcome;
}

}  // namespace fcm::harness
