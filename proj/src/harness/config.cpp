#include "fcm/harness/config.hpp"

#include <json.hpp>

#include <fstream>

#include "fcm/harness/generators.hpp"
#include "fcm/io/mesh_io.hpp"

namespace fcm::harness {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

void require_schema(const json& j) {
  if (!j.contains("schema") || !j["schema"].is_string() ||
      j["schema"].get<std::string>() != "fcm-case/1")
    throw ConfigError("config must declare \"schema\": \"fcm-case/1\"");
}

template <class T>
T get_or(const json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw ConfigError("config field '" + key + "' has the wrong type");
  }
}

template <class T>
T get_req(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key))
    throw ConfigError("missing required field '" + key + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw ConfigError("field '" + key + "' in " + where +
                      " has the wrong type");
  }
}

template <int D>
Vec<D> get_vec(const json& j, const std::string& key, const std::string& where,
               const Vec<D>& fallback) {
  if (!j.contains(key)) return fallback;
  const auto arr = get_req<std::vector<double>>(j, key, where);
  if (arr.size() != D)
    throw ConfigError("vector '" + key + "' in " + where + " must have " +
                      std::to_string(D) + " components");
  Vec<D> v;
  for (int k = 0; k < D; ++k) v[k] = arr[k];
  return v;
}

Vec3 pad3(const VecX& v) {
  Vec3 out = Vec3::Zero();
  for (int k = 0; k < v.size() && k < 3; ++k) out[k] = v[k];
  return out;
}

fem::Schedule parse_schedule(const json& j, const std::string& where) {
  if (!j.contains("schedule")) return fem::Schedule{};
  std::vector<std::pair<double, double>> table;
  try {
    for (const auto& row : j.at("schedule")) {
      if (!row.is_array() || row.size() != 2)
        throw ConfigError("schedule rows must be [s, value] pairs in " + where);
      table.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("bad schedule in " + where);
  }
  return fem::Schedule(std::move(table));
}

template <int D>
std::unique_ptr<fem::Mesh<D>> build_mesh(const json& jmesh,
                                         const std::string& where) {
  if (jmesh.contains("file")) {
    const auto path = get_req<std::string>(jmesh, "file", where);
    std::ifstream probe(path);
    if (!probe)
      throw ConfigError("mesh file '" + path + "' does not exist (" + where +
                        ")");
    if (path.size() > 4 && path.substr(path.size() - 4) == ".msh")
      return std::make_unique<fem::Mesh<D>>(io::read_gmsh_mesh<D>(path));
    return std::make_unique<fem::Mesh<D>>(io::read_native_mesh<D>(path));
  }
  const auto gen = get_req<std::string>(jmesh, "generator", where);
  const auto coords = [&](const char* axis, double lo, double hi) {
    const json ja = jmesh.contains(axis) ? jmesh.at(axis) : json::object();
    const int n = get_or<int>(ja, "n", 10);
    const double a = get_or<double>(ja, "min", lo);
    const double b = get_or<double>(ja, "max", hi);
    const std::string grading = get_or<std::string>(ja, "grading", "uniform");
    const double power = get_or<double>(ja, "power", 2.0);
    if (grading == "uniform") return uniform_coords(a, b, n);
    if (grading == "toward_max") return power_coords(a, b, n, power);
    if (grading == "toward_min") {
      auto c = power_coords(-b, -a, n, power);
      std::reverse(c.begin(), c.end());
      for (double& v : c) v = -v;
      return c;
    }
    if (grading == "center") return center_cluster_coords(a, b, n, power);
    throw ConfigError("unknown grading '" + grading + "' in " + where);
  };

  if constexpr (D == 2) {
    if (gen == "rect") {
      const auto et = get_or<std::string>(jmesh, "etype", "quad4");
      return std::make_unique<fem::Mesh<2>>(rect_block_2d(
          coords("x", 0, 1), coords("y", 0, 1),
          et == "tri3" ? fem::ElemType::Tri3 : fem::ElemType::Quad4));
    }
    if (gen == "semicircle")
      return std::make_unique<fem::Mesh<2>>(semicircle_2d(
          get_req<double>(jmesh, "radius", where),
          get_or<int>(jmesh, "n_radial", 24), get_or<int>(jmesh, "n_angular", 48),
          get_or<double>(jmesh, "radial_power", 2.0),
          get_or<double>(jmesh, "angular_power", 2.0)));
    if (gen == "diamond")
      return std::make_unique<fem::Mesh<2>>(
          diamond_2d(get_req<double>(jmesh, "half_diagonal", where),
                     get_or<int>(jmesh, "n", 10),
                     get_vec<2>(jmesh, "center", where, Vec2::Zero())));
    if (gen == "star")
      return std::make_unique<fem::Mesh<2>>(star_2d(
          get_req<double>(jmesh, "r_outer", where),
          get_req<double>(jmesh, "r_inner", where),
          get_or<int>(jmesh, "subdivisions", 4), get_or<int>(jmesh, "rings", 6),
          get_vec<2>(jmesh, "center", where, Vec2::Zero())));
    throw ConfigError("unknown 2D mesh generator '" + gen + "' in " + where);
  } else {
    if (gen == "box")
      return std::make_unique<fem::Mesh<3>>(box_tet_3d(
          coords("x", 0, 1), coords("y", 0, 1), coords("z", 0, 1)));
    throw ConfigError("unknown 3D mesh generator '" + gen + "' in " + where);
  }
}

template <int D>
geo::SdfPtr<D> build_rigid(const json& j, const std::string& where) {
  const auto kind = get_req<std::string>(j, "kind", where);
  if (kind == "half_space")
    return std::make_shared<geo::HalfSpaceSdf<D>>(
        get_vec<D>(j, "normal", where, Vec<D>::Unit(D - 1)),
        get_or<double>(j, "offset", 0.0));
  if (kind == "sphere")
    return std::make_shared<geo::SphereSdf<D>>(
        get_vec<D>(j, "center", where, Vec<D>::Zero()),
        get_req<double>(j, "radius", where));
  if (kind == "box")
    return std::make_shared<geo::BoxSdf<D>>(
        get_vec<D>(j, "center", where, Vec<D>::Zero()),
        get_vec<D>(j, "half", where, Vec<D>::Ones()));
  if constexpr (D == 2) {
    if (kind == "wedge")
      return geo::make_wedge2d(get_vec<2>(j, "apex", where, Vec2::Zero()),
                          get_vec<2>(j, "direction", where, Vec2(-1, 0)),
                          get_req<double>(j, "beta_deg", where) * kPi / 180.0,
                          get_or<double>(j, "depth", 1.0));
  } else {
    if (kind == "cone")
      return std::make_shared<geo::ConeSdf>(
          get_vec<3>(j, "apex", where, Vec3::Zero()),
          get_vec<3>(j, "axis", where, Vec3::UnitZ()),
          get_req<double>(j, "height", where),
          get_req<double>(j, "base_radius", where));
  }
  throw ConfigError("unknown rigid shape '" + kind + "' in " + where);
}

contact::ContactParams parse_contact(const json& j) {
  contact::ContactParams p;
  p.k = get_req<double>(j, "k", "contact");
  p.m = get_or<double>(j, "m", 1.0);
  p.fibers = get_or<std::int64_t>(j, "fibers", 10000);
  p.fiber_length = get_or<double>(j, "fiber_length", 0.0);
  p.eps_tangent_rel = get_or<double>(j, "eps_tangent_rel", 1e-8);
  p.subdivisions = get_or<int>(j, "subdivisions", 16);
  const auto policy =
      get_or<std::string>(j, "seed_policy", "fresh-per-step");
  if (policy == "fresh-per-step")
    p.seed_policy = contact::SeedPolicy::FreshPerStep;
  else if (policy == "frozen-per-outer-iteration")
    p.seed_policy = contact::SeedPolicy::FrozenPerOuterIteration;
  else
    throw ConfigError("unknown seed_policy '" + policy + "'");
  p.validate();
  return p;
}

}  // namespace

int case_dim(const std::string& text) {
  const json j = parse_json(text);
  require_schema(j);
  const int dim = get_req<int>(j, "dim", "case");
  if (dim != 2 && dim != 3) throw ConfigError("dim must be 2 or 3");
  return dim;
}

template <int D>
ResolvedCase<D> load_case(const std::string& text) {
  const json j = parse_json(text);
  require_schema(j);
  if (get_req<int>(j, "dim", "case") != D)
    throw ConfigError("case dim mismatch");

  ResolvedCase<D> c;
  c.name = get_or<std::string>(j, "name", "case");

  if (!j.contains("bodies") || !j["bodies"].is_array() || j["bodies"].empty())
    throw ConfigError("case must declare a non-empty 'bodies' array");
  for (const auto& jb : j["bodies"]) {
    const auto name =
        get_or<std::string>(jb, "name",
                            "body" + std::to_string(c.system.bodies.size()));
    const std::string where = "body '" + name + "'";
    if (!jb.contains("mesh")) throw ConfigError(where + " is missing 'mesh'");
    c.meshes.push_back(build_mesh<D>(jb.at("mesh"), where));

    solvers::Body<D> body;
    body.name = name;
    body.mesh = c.meshes.back().get();

    const json jm = jb.contains("material") ? jb.at("material") : json::object();
    const auto law = get_or<std::string>(jm, "law", "linear");
    const double E = get_req<double>(jm, "E", where + " material");
    const double nu = get_req<double>(jm, "nu", where + " material");
    const double rho = get_or<double>(jm, "rho", 1.0);
    if (law == "linear")
      body.material = fem::Material::linear_elastic(E, nu, rho);
    else if (law == "neo-hookean")
      body.material = fem::Material::neo_hookean(E, nu, rho);
    else
      throw ConfigError("unknown material law '" + law + "' in " + where);

    body.initial_velocity =
        get_vec<D>(jb, "initial_velocity", where, Vec<D>::Zero());

    if (jb.contains("bcs")) {
      for (const auto& jbc : jb.at("bcs")) {
        const auto kind = get_req<std::string>(jbc, "kind", where + " bc");
        fem::BoundaryCondition bc;
        bc.schedule = parse_schedule(jbc, where + " bc");
        if (kind == "dirichlet") {
          bc.kind = fem::BoundaryCondition::Kind::Dirichlet;
          bc.set = get_req<std::string>(jbc, "set", where + " bc");
          const auto mask = get_or<std::vector<bool>>(
              jbc, "mask", std::vector<bool>(D, true));
          if (mask.size() != D)
            throw ConfigError("dirichlet mask must have " + std::to_string(D) +
                              " entries in " + where);
          for (int k = 0; k < 3; ++k) bc.mask[k] = k < D ? bool(mask[k]) : false;
          bc.vector = pad3(get_vec<D>(jbc, "value", where, Vec<D>::Zero()));
        } else if (kind == "traction") {
          bc.kind = fem::BoundaryCondition::Kind::Traction;
          bc.set = get_req<std::string>(jbc, "set", where + " bc");
          bc.vector = pad3(get_vec<D>(jbc, "vector", where, Vec<D>::Zero()));
        } else if (kind == "body_force") {
          bc.kind = fem::BoundaryCondition::Kind::BodyForce;
          bc.vector = pad3(get_vec<D>(jbc, "vector", where, Vec<D>::Zero()));
        } else {
          throw ConfigError("unknown bc kind '" + kind + "' in " + where);
        }
        body.bcs.push_back(std::move(bc));
      }
    }
    fem::validate_bcs(*body.mesh, body.bcs);
    c.system.bodies.push_back(std::move(body));
  }

  if (j.contains("rigid_shapes"))
    for (const auto& jr : j.at("rigid_shapes"))
      c.system.obstacles.push_back(build_rigid<D>(jr, "rigid_shapes"));

  if (!j.contains("contact") &&
      (c.system.bodies.size() > 1 || !c.system.obstacles.empty()))
    throw ConfigError("multi-body case needs a 'contact' section");
  if (j.contains("contact")) c.system.contact = parse_contact(j.at("contact"));

  const json js = j.contains("solver") ? j.at("solver") : json::object();
  const auto type = get_req<std::string>(js, "type", "solver");
  const std::uint64_t seed = get_or<std::uint64_t>(j, "seed", 1);
  if (type == "dynamic") {
    c.dynamic = true;
    c.dyn.dt = get_or<double>(js, "dt", 0.0);
    c.dyn.cfl = get_or<double>(js, "cfl", 0.5);
    c.dyn.t_end = get_req<double>(js, "t_end", "solver");
    c.dyn.output_every = get_or<int>(js, "output_every", 1);
    c.dyn.seed = seed;
    c.dyn.validate();
  } else if (type == "static") {
    c.dynamic = false;
    c.stat.load_steps = get_or<int>(js, "load_steps", 10);
    c.stat.eps_outer = get_or<double>(js, "eps_outer", 1e-6);
    c.stat.eps_inner = get_or<double>(js, "eps_inner", 1e-9);
    c.stat.max_outer = get_or<int>(js, "max_outer", 60);
    c.stat.max_inner = get_or<int>(js, "max_inner", 30);
    c.stat.relaxation = get_or<double>(js, "relaxation", 0.7);
    c.stat.seed = seed;
    c.stat.validate();
  } else {
    throw ConfigError("solver type must be 'static' or 'dynamic'");
  }

  const json jo = j.contains("output") ? j.at("output") : json::object();
  c.output.directory = get_or<std::string>(jo, "directory", "out/" + c.name);
  c.output.prefix = get_or<std::string>(jo, "prefix", c.name);
  c.output.vtk_every = get_or<int>(jo, "vtk_every", 0);

  if (j.contains("benchmark")) {
    const json& jbm = j.at("benchmark");
    c.benchmark.kind = get_req<std::string>(jbm, "kind", "benchmark");
    for (const auto& [key, val] : jbm.items())
      if (val.is_number()) c.benchmark.params[key] = val.template get<double>();
  }
  return c;
}

template <int D>
void apply_overrides(ResolvedCase<D>& c, const CaseOverrides& o) {
  if (o.has_seed) {
    c.dyn.seed = o.seed;
    c.stat.seed = o.seed;
  }
  if (o.has_fibers) {
    if (o.fibers <= 0) throw ConfigError("fiber override must be positive");
    c.system.contact.fibers = o.fibers;
  }
  if (o.has_out) c.output.directory = o.out;
}

template ResolvedCase<2> load_case<2>(const std::string&);
template ResolvedCase<3> load_case<3>(const std::string&);
template void apply_overrides<2>(ResolvedCase<2>&, const CaseOverrides&);
template void apply_overrides<3>(ResolvedCase<3>&, const CaseOverrides&);

}  // namespace fcm::harness
