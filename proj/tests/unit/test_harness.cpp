#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fcm/harness/cases.hpp"
#include "fcm/harness/config.hpp"
#include "fcm/harness/generators.hpp"
#include "fcm/harness/run.hpp"
#include "fcm/io/mesh_io.hpp"
#include "fcm/io/vtk.hpp"

using namespace fcm;
using namespace fcm::harness;
namespace fs = std::filesystem;

namespace {

std::string tmp_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("fcm_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

//! A tiny contact-free dynamic case: one block drifting with no forces.
std::string drift_case_json(const std::string& out_dir) {
  return R"({
    "schema": "fcm-case/1",
    "name": "drift",
    "dim": 2,
    "seed": 9,
    "bodies": [{
      "name": "block",
      "mesh": {"generator": "rect", "etype": "quad4",
               "x": {"n": 3, "min": 0.0, "max": 1.0},
               "y": {"n": 3, "min": 0.0, "max": 1.0}},
      "material": {"law": "linear", "E": 100.0, "nu": 0.3, "rho": 1.0},
      "initial_velocity": [0.25, -0.125]
    }],
    "solver": {"type": "dynamic", "dt": 0.001, "t_end": 0.02, "output_every": 2},
    "output": {"directory": ")" +
         out_dir + R"(", "prefix": "drift"}
  })";
}

}  // namespace

TEST_CASE("config validation failures") {
  CHECK_THROWS_AS(case_dim("{not json"), ConfigError);
  CHECK_THROWS_AS(case_dim(R"({"dim": 2})"), ConfigError);  // missing schema
  CHECK_THROWS_AS(case_dim(R"({"schema": "other/9", "dim": 2})"), ConfigError);
  CHECK_THROWS_AS(case_dim(R"({"schema": "fcm-case/1", "dim": 4})"), ConfigError);
  CHECK_THROWS_AS(load_case<2>(R"({"schema": "fcm-case/1", "dim": 2,
    "bodies": [], "solver": {"type": "static"}})"),
                  ConfigError);
}

TEST_CASE("run_case maps errors to exit codes") {
  SUBCASE("unknown spec") {
    const auto out = run_case("/definitely/not/here.json");
    CHECK(out.exit_code == 2);
    CHECK(out.error_kind == "config");
  }
  SUBCASE("missing mesh file is named in the message") {
    const std::string dir = tmp_dir("badmesh");
    const std::string cfg_path = dir + "/case.json";
    std::ofstream(cfg_path) << R"({
      "schema": "fcm-case/1", "name": "bad", "dim": 2,
      "bodies": [{"mesh": {"file": "/no/such/mesh.fcmesh"},
                  "material": {"law": "linear", "E": 1.0, "nu": 0.3}}],
      "solver": {"type": "static"}})";
    const auto out = run_case(cfg_path);
    CHECK(out.exit_code == 2);
    CHECK(out.error.find("/no/such/mesh.fcmesh") != std::string::npos);
  }
  SUBCASE("divergence maps to exit 3") {
    const std::string dir = tmp_dir("diverge");
    const std::string cfg_path = dir + "/case.json";
    // Explicit dynamics with an absurd fixed step.
    std::ofstream(cfg_path) << R"({
      "schema": "fcm-case/1", "name": "boom", "dim": 2,
      "bodies": [{"mesh": {"generator": "rect", "etype": "quad4",
                           "x": {"n": 2, "min": 0.0, "max": 1.0},
                           "y": {"n": 2, "min": 0.0, "max": 1.0}},
                  "material": {"law": "linear", "E": 1e9, "nu": 0.3, "rho": 1e-3},
                  "initial_velocity": [1000.0, 0.0],
                  "bcs": [{"kind": "dirichlet", "set": "bottom",
                           "mask": [true, true], "value": [0, 0]}]}],
      "solver": {"type": "dynamic", "dt": 10.0, "t_end": 1000.0},
      "output": {"directory": ")" << dir << R"("}})";
    const auto out = run_case(cfg_path);
    CHECK(out.exit_code == 3);
    CHECK(out.error_kind == "solver");
  }
}

TEST_CASE("same config and seed give byte-identical CSV output") {
  const std::string d1 = tmp_dir("det1"), d2 = tmp_dir("det2");
  std::ofstream(d1 + "/case.json") << drift_case_json(d1);
  std::ofstream(d2 + "/case.json") << drift_case_json(d2);
  const auto o1 = run_case(d1 + "/case.json");
  const auto o2 = run_case(d2 + "/case.json");
  REQUIRE(o1.exit_code == 0);
  REQUIRE(o2.exit_code == 0);
  CHECK(read_file(d1 + "/drift_energy.csv") ==
        read_file(d2 + "/drift_energy.csv"));
}

TEST_CASE("vtk output passes a conformance scan") {
  const std::string dir = tmp_dir("vtk");
  std::ofstream(dir + "/case.json") << drift_case_json(dir);
  const auto out = run_case(dir + "/case.json");
  REQUIRE(out.exit_code == 0);
  const std::string text = read_file(dir + "/drift_block_final.vtk");
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# vtk DataFile Version 3.0");
  std::getline(in, line);  // title
  std::getline(in, line);
  CHECK(line == "ASCII");
  std::getline(in, line);
  CHECK(line == "DATASET UNSTRUCTURED_GRID");

  int points = 0, cells = 0, cell_entries = 0, cell_types = 0;
  std::string word;
  while (in >> word) {
    if (word == "POINTS") {
      in >> points;
    } else if (word == "CELLS") {
      in >> cells >> cell_entries;
      int total = 0, v;
      for (int c = 0; c < cells; ++c) {
        int npe;
        in >> npe;
        total += npe + 1;
        for (int k = 0; k < npe; ++k) {
          in >> v;
          CHECK(v >= 0);
          CHECK(v < points);
        }
      }
      CHECK(total == cell_entries);
    } else if (word == "CELL_TYPES") {
      in >> cell_types;
      CHECK(cell_types == cells);
    }
  }
  CHECK(points == 16);  // 4x4 nodes
  CHECK(cells == 9);
}

TEST_CASE("native mesh round trip with sets") {
  const std::string dir = tmp_dir("meshio");
  const fem::Mesh2 mesh = rect_block_2d(uniform_coords(0, 2, 3),
                                        uniform_coords(0, 1, 2),
                                        fem::ElemType::Quad4);
  io::write_native_mesh<2>(dir + "/m.fcmesh", mesh);
  CHECK(io::native_mesh_dim(dir + "/m.fcmesh") == 2);
  const fem::Mesh2 back = io::read_native_mesh<2>(dir + "/m.fcmesh");
  CHECK(back.n_nodes() == mesh.n_nodes());
  CHECK(back.n_elems() == mesh.n_elems());
  CHECK(back.conn == mesh.conn);
  for (int n = 0; n < mesh.n_nodes(); ++n)
    CHECK((back.nodes[n] - mesh.nodes[n]).norm() == 0.0);
  CHECK(back.node_sets.at("left") == mesh.node_sets.at("left"));
  CHECK(back.facet_sets.at("top").size() == mesh.facet_sets.at("top").size());
}

TEST_CASE("gmsh 2.2 reader") {
  const std::string dir = tmp_dir("gmsh");
  const std::string path = dir + "/square.msh";
  // Unit square, two triangles, tagged bottom edge.
  std::ofstream(path) << R"($MeshFormat
2.2 0 8
$EndMeshFormat
$PhysicalNames
2
1 7 "bottom"
2 1 "body"
$EndPhysicalNames
$Nodes
4
1 0 0 0
2 1 0 0
3 1 1 0
4 0 1 0
$EndNodes
$Elements
3
1 1 2 7 1 1 2
2 2 2 1 11 1 2 3
3 2 2 1 11 1 3 4
$EndElements
)";
  CHECK(io::gmsh_mesh_dim(path) == 2);
  const fem::Mesh2 mesh = io::read_gmsh_mesh<2>(path);
  CHECK(mesh.n_nodes() == 4);
  CHECK(mesh.n_elems() == 2);
  CHECK(mesh.etype == fem::ElemType::Tri3);
  CHECK(mesh.facets.size() == 4);
  REQUIRE(mesh.facet_sets.count("bottom") == 1);
  CHECK(mesh.facet_sets.at("bottom").size() == 1);
  const auto& f = mesh.facets[mesh.facet_sets.at("bottom")[0]];
  CHECK(std::min(f[0], f[1]) == 0);
  CHECK(std::max(f[0], f[1]) == 1);
  REQUIRE(mesh.node_sets.count("bottom") == 1);
  CHECK(mesh.node_sets.at("bottom") == std::vector<int>({0, 1}));
}

TEST_CASE("built-in cases parse and resolve") {
  for (const auto& name : builtin_case_names()) {
    CAPTURE(name);
    const std::string text = builtin_case_json(name);
    const int dim = case_dim(text);
    if (dim == 2) {
      const auto c = load_case<2>(text);
      CHECK(!c.system.bodies.empty());
    } else {
      const auto c = load_case<3>(text);
      CHECK(!c.system.bodies.empty());
    }
  }
  CHECK(is_builtin_case("hertz"));
  CHECK(!is_builtin_case("nope"));
}

TEST_CASE("seed and fiber overrides change the resolved case") {
  auto c = load_case<2>(builtin_case_json("bar1d"));
  CaseOverrides o;
  o.has_seed = true;
  o.seed = 777;
  o.has_fibers = true;
  o.fibers = 1234;
  o.has_out = true;
  o.out = "elsewhere";
  apply_overrides(c, o);
  CHECK(c.dyn.seed == 777);
  CHECK(c.system.contact.fibers == 1234);
  CHECK(c.output.directory == "elsewhere");
}
