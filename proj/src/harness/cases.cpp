#include "fcm/harness/cases.hpp"

#include <json.hpp>

#include "fcm/types.hpp"

namespace fcm::harness {

namespace {

using nlohmann::json;

// Each case documents the stiffness k it runs with; k is a case parameter
// of the volume energy law, chosen per benchmark and recorded here.

json hertz_case() {
  const double R = 8.0, E = 200.0, nu = 0.3, p = 1.0;
  json j;
  j["schema"] = "fcm-case/1";
  j["name"] = "hertz";
  j["dim"] = 2;
  j["seed"] = 2024;
  j["bodies"] = json::array({{
      {"name", "semicircle"},
      {"mesh",
       {{"generator", "semicircle"},
        {"radius", R},
        {"n_radial", 36},
        {"n_angular", 72},
        {"radial_power", 2.4},
        {"angular_power", 1.9}}},
      {"material", {{"law", "linear"}, {"E", E}, {"nu", nu}, {"rho", 1.0}}},
      {"bcs", json::array({{{"kind", "traction"},
                            {"set", "top"},
                            {"vector", {0.0, -p}},
                            {"schedule", {{0.0, 0.0}, {1.0, 1.0}}}}})},
  }});
  j["rigid_shapes"] =
      json::array({{{"kind", "half_space"}, {"normal", {0.0, 1.0}}, {"offset", 0.0}}});
  j["contact"] = {{"k", 24.0},          {"m", 1.0},
                  {"fibers", 60000},    {"fiber_length", 0.12},
                  {"seed_policy", "frozen-per-outer-iteration"}};
  j["solver"] = {{"type", "static"}, {"load_steps", 4},
                 {"eps_outer", 4e-3}, {"eps_inner", 1e-7},
                 {"max_outer", 120},  {"relaxation", 0.35}};
  j["output"] = {{"directory", "out/hertz"}, {"prefix", "hertz"}};
  j["benchmark"] = {{"kind", "hertz"}, {"pressure", p},      {"radius", R},
                    {"E", E},          {"nu", nu}};
  return j;
}

json hertz_quadratic_case() {
  json j = hertz_case();
  j["name"] = "hertz-m2";
  // Quadratic energy law: w = k Vc^2. The stiffness is rescaled so the
  // plateau traction 2 k Vc sits near the m = 1 value at the expected
  // overlap.
  j["contact"]["m"] = 2.0;
  j["contact"]["k"] = 1500.0;
  j["solver"]["relaxation"] = 0.5;
  j["output"] = {{"directory", "out/hertz-m2"}, {"prefix", "hertz_m2"}};
  return j;
}

json wedge_case() {
  const double E = 500.0, nu = 0.3;
  json j;
  j["schema"] = "fcm-case/1";
  j["name"] = "wedge";
  j["dim"] = 2;
  j["seed"] = 77;
  j["bodies"] = json::array({{
      {"name", "block"},
      {"mesh",
       {{"generator", "rect"},
        {"etype", "quad4"},
        {"x", {{"n", 56}, {"min", 0.0}, {"max", 4.0}, {"grading", "toward_min"}, {"power", 2.2}}},
        {"y", {{"n", 48}, {"min", -2.0}, {"max", 2.0}, {"grading", "center"}, {"power", 1.8}}}}},
      {"material", {{"law", "linear"}, {"E", E}, {"nu", nu}, {"rho", 1.0}}},
      {"bcs", json::array({{{"kind", "dirichlet"},
                            {"set", "right"},
                            {"mask", {true, true}},
                            {"value", {-0.16, 0.0}},
                            {"schedule", {{0.0, 0.0}, {1.0, 1.0}}}}})},
  }});
  j["rigid_shapes"] = json::array({{{"kind", "wedge"},
                                    {"apex", {0.0, 0.0}},
                                    {"direction", {-1.0, 0.0}},
                                    {"beta_deg", 45.0},
                                    {"depth", 2.5}}});
  j["contact"] = {{"k", 1100.0},        {"m", 1.0},
                  {"fibers", 60000},    {"fiber_length", 0.05},
                  {"seed_policy", "frozen-per-outer-iteration"}};
  j["solver"] = {{"type", "static"}, {"load_steps", 8},
                 {"eps_outer", 2e-3}, {"eps_inner", 1e-7},
                 {"max_outer", 120},  {"relaxation", 0.35}};
  j["output"] = {{"directory", "out/wedge"}, {"prefix", "wedge"}};
  j["benchmark"] = {{"kind", "wedge"}, {"E", E}, {"nu", nu},
                    {"beta_deg", 45.0}};
  return j;
}

json cone_case() {
  const double E = 500.0, nu = 0.35, uz = 0.2, beta_deg = 45.0;
  json j;
  j["schema"] = "fcm-case/1";
  j["name"] = "cone";
  j["dim"] = 3;
  j["seed"] = 99;
  j["bodies"] = json::array({{
      {"name", "block"},
      {"mesh",
       {{"generator", "box"},
        {"x", {{"n", 18}, {"min", -0.5}, {"max", 0.5}, {"grading", "center"}, {"power", 1.8}}},
        {"y", {{"n", 18}, {"min", -0.5}, {"max", 0.5}, {"grading", "center"}, {"power", 1.8}}},
        {"z", {{"n", 9}, {"min", -0.5}, {"max", 0.0}, {"grading", "toward_max"}, {"power", 1.8}}}}},
      {"material", {{"law", "linear"}, {"E", E}, {"nu", nu}, {"rho", 1.0}}},
      {"bcs", json::array({{{"kind", "dirichlet"},
                            {"set", "zmin"},
                            {"mask", {true, true, true}},
                            {"value", {0.0, 0.0, uz}},
                            {"schedule", {{0.0, 0.0}, {1.0, 1.0}}}}})},
  }});
  // Rigid cone, apex touching the block's top face center, opening upward.
  j["rigid_shapes"] = json::array({{{"kind", "cone"},
                                    {"apex", {0.0, 0.0, 0.0}},
                                    {"axis", {0.0, 0.0, 1.0}},
                                    {"height", 0.4},
                                    {"base_radius", 0.4}}});
  j["contact"] = {{"k", 900.0},         {"m", 1.0},
                  {"fibers", 60000},    {"fiber_length", 0.04},
                  {"seed_policy", "frozen-per-outer-iteration"}};
  j["solver"] = {{"type", "static"}, {"load_steps", 5},
                 {"eps_outer", 4e-3}, {"eps_inner", 1e-7},
                 {"max_outer", 100},  {"relaxation", 0.35}};
  j["output"] = {{"directory", "out/cone"}, {"prefix", "cone"}};
  j["benchmark"] = {{"kind", "cone"},     {"E", E},   {"nu", nu},
                    {"beta_deg", beta_deg}, {"uz", uz}};
  return j;
}

json punch_case() {
  // Flat punch pressed into a block, both hyperelastic (meters, Pa).
  json j;
  j["schema"] = "fcm-case/1";
  j["name"] = "punch";
  j["dim"] = 2;
  j["seed"] = 55;
  j["bodies"] = json::array(
      {{
           {"name", "block"},
           {"mesh",
            {{"generator", "rect"},
             {"etype", "quad4"},
             {"x", {{"n", 32}, {"min", -0.002}, {"max", 0.002}}},
             {"y", {{"n", 16}, {"min", -0.002}, {"max", 0.0}, {"grading", "toward_max"}, {"power", 1.5}}}}},
           {"material",
            {{"law", "neo-hookean"}, {"E", 70e9}, {"nu", 0.36}, {"rho", 2700.0}}},
           {"bcs", json::array({{{"kind", "dirichlet"},
                                 {"set", "bottom"},
                                 {"mask", {true, true}},
                                 {"value", {0.0, 0.0}}}})},
       },
       {
           {"name", "punch"},
           {"mesh",
            {{"generator", "rect"},
             {"etype", "quad4"},
             {"x", {{"n", 20}, {"min", -0.001}, {"max", 0.001}}},
             {"y", {{"n", 10}, {"min", 0.00005}, {"max", 0.00105}, {"grading", "toward_min"}, {"power", 1.5}}}}},
           {"material",
            {{"law", "neo-hookean"}, {"E", 200e9}, {"nu", 0.29}, {"rho", 7800.0}}},
           {"bcs", json::array({{{"kind", "dirichlet"},
                                 {"set", "top"},
                                 {"mask", {true, true}},
                                 {"value", {0.0, -4e-4}},
                                 {"schedule", {{0.0, 0.0}, {1.0, 1.0}}}}})},
       }});
  j["contact"] = {{"k", 6.0e13},        {"m", 2.0},
                  {"fibers", 40000},    {"fiber_length", 0.0002},
                  {"seed_policy", "frozen-per-outer-iteration"}};
  j["solver"] = {{"type", "static"}, {"load_steps", 8},
                 {"eps_outer", 2e-5}, {"eps_inner", 1e2},
                 {"max_outer", 100},  {"relaxation", 0.4}};
  j["output"] = {{"directory", "out/punch"}, {"prefix", "punch"}};
  j["benchmark"] = {{"kind", "punch"}};
  return j;
}

json ironing_case() {
  json j;
  j["schema"] = "fcm-case/1";
  j["name"] = "ironing";
  j["dim"] = 2;
  j["seed"] = 4711;
  // Vertical indentation over the first 8 of 23 steps, then sliding.
  const double s1 = 8.0 / 23.0;
  j["bodies"] = json::array(
      {{
           {"name", "foundation"},
           {"mesh",
            {{"generator", "rect"},
             {"etype", "quad4"},
             {"x", {{"n", 48}, {"min", 0.0}, {"max", 12.0}}},
             {"y", {{"n", 12}, {"min", 0.0}, {"max", 3.0}, {"grading", "toward_max"}, {"power", 1.4}}}}},
           {"material",
            {{"law", "neo-hookean"}, {"E", 500.0}, {"nu", 0.3}, {"rho", 1.0}}},
           {"bcs", json::array({{{"kind", "dirichlet"},
                                 {"set", "bottom"},
                                 {"mask", {true, true}},
                                 {"value", {0.0, 0.0}}}})},
       },
       {
           {"name", "indenter"},
           {"mesh",
            {{"generator", "rect"},
             {"etype", "quad4"},
             {"x", {{"n", 10}, {"min", 2.0}, {"max", 4.0}}},
             {"y", {{"n", 10}, {"min", 3.05}, {"max", 5.05}, {"grading", "toward_min"}, {"power", 1.4}}}}},
           {"material",
            {{"law", "neo-hookean"}, {"E", 5000.0}, {"nu", 0.3}, {"rho", 1.0}}},
           {"bcs",
            json::array(
                {{{"kind", "dirichlet"},
                  {"set", "top"},
                  {"mask", {false, true}},
                  {"value", {0.0, -1.3}},
                  {"schedule", {{0.0, 0.0}, {s1, 1.0}, {1.0, 1.0}}}},
                 {{"kind", "dirichlet"},
                  {"set", "top"},
                  {"mask", {true, false}},
                  {"value", {7.5, 0.0}},
                  {"schedule", {{0.0, 0.0}, {s1, 0.0}, {1.0, 1.0}}}}})},
       }});
  j["contact"] = {{"k", 800.0},         {"m", 1.0},
                  {"fibers", 40000},    {"fiber_length", 0.12},
                  {"seed_policy", "frozen-per-outer-iteration"}};
  j["solver"] = {{"type", "static"}, {"load_steps", 23},
                 {"eps_outer", 2e-2}, {"eps_inner", 1e-6},
                 {"max_outer", 150},  {"relaxation", 0.3}};
  j["output"] = {{"directory", "out/ironing"}, {"prefix", "ironing"}};
  j["benchmark"] = {{"kind", "ironing"}};
  return j;
}

json bar1d_case() {
  const double E = 900.0, rho = 1.0, v0 = 10.0, h0 = 1.0, L = 10.0;
  json j;
  j["schema"] = "fcm-case/1";
  j["name"] = "bar1d";
  j["dim"] = 2;
  j["seed"] = 321;
  j["bodies"] = json::array({{
      {"name", "bar"},
      {"mesh",
       {{"generator", "rect"},
        {"etype", "quad4"},
        {"x", {{"n", 1}, {"min", 0.0}, {"max", 0.1}}},
        {"y", {{"n", 100}, {"min", h0}, {"max", h0 + L}}}}},
      {"material", {{"law", "linear"}, {"E", E}, {"nu", 0.0}, {"rho", rho}}},
      {"initial_velocity", {0.0, -v0}},
      {"bcs",
       json::array({{{"kind", "dirichlet"},
                     {"set", "left"},
                     {"mask", {true, false}},
                     {"value", {0.0, 0.0}}},
                    {{"kind", "dirichlet"},
                     {"set", "right"},
                     {"mask", {true, false}},
                     {"value", {0.0, 0.0}}}})},
  }});
  j["rigid_shapes"] = json::array(
      {{{"kind", "half_space"}, {"normal", {0.0, 1.0}}, {"offset", 0.0}}});
  // Quadratic law with a frozen fiber batch: the nominal contact strain
  // here is v0/c0 = 1/3, and a depth-independent (m = 1) traction chatters
  // the tip element into inversion under per-step estimator noise. The
  // quadratic law gives a finite interface stiffness (2 k w^2) and the
  // frozen batch makes the contact force a deterministic potential.
  j["contact"] = {{"k", 75000.0},    {"m", 2.0},
                  {"fibers", 30000}, {"fiber_length", 0.05},
                  {"seed_policy", "frozen-per-outer-iteration"}};
  j["solver"] = {{"type", "dynamic"}, {"cfl", 0.25}, {"t_end", 1.05},
                 {"output_every", 1}};
  j["output"] = {{"directory", "out/bar1d"}, {"prefix", "bar"}};
  j["benchmark"] = {{"kind", "bar1d"}, {"L", L},   {"E", E},
                    {"rho", rho},      {"v0", v0}, {"h0", h0},
                    {"width", 0.1}};
  return j;
}

json diamond_case() {
  json j;
  j["schema"] = "fcm-case/1";
  j["name"] = "diamond";
  j["dim"] = 2;
  j["seed"] = 88;
  j["bodies"] = json::array(
      {{
           {"name", "diamond"},
           {"mesh", {{"generator", "diamond"}, {"half_diagonal", 0.5}, {"n", 16}, {"center", {0.0, 0.54}}}},
           {"material",
            {{"law", "neo-hookean"}, {"E", 73.2e9}, {"nu", 0.4}, {"rho", 1010.0}}},
           {"initial_velocity", {0.0, -50.0}},
       },
       {
           {"name", "block"},
           {"mesh",
            {{"generator", "rect"},
             {"etype", "quad4"},
             {"x", {{"n", 36}, {"min", -1.5}, {"max", 1.5}}},
             {"y", {{"n", 12}, {"min", -1.0}, {"max", 0.0}, {"grading", "toward_max"}, {"power", 1.4}}}}},
           {"material",
            {{"law", "neo-hookean"}, {"E", 7.32e9}, {"nu", 0.4}, {"rho", 1010.0}}},
           {"bcs", json::array({{{"kind", "dirichlet"},
                                 {"set", "bottom"},
                                 {"mask", {true, true}},
                                 {"value", {0.0, 0.0}}}})},
       }});
  j["contact"] = {{"k", 3.2e9},      {"m", 1.0},
                  {"fibers", 100000}, {"fiber_length", 0.03},
                  {"seed_policy", "fresh-per-step"}};
  j["solver"] = {{"type", "dynamic"}, {"cfl", 0.15}, {"t_end", 1.8e-3},
                 {"output_every", 5}};
  j["output"] = {{"directory", "out/diamond"}, {"prefix", "diamond"}};
  j["benchmark"] = {{"kind", "diamond"}};
  return j;
}

json star_case() {
  json j = diamond_case();
  j["name"] = "star";
  j["bodies"][0]["name"] = "star";
  j["bodies"][0]["mesh"] = {{"generator", "star"},
                            {"r_outer", 0.5},
                            {"r_inner", 0.25},
                            {"subdivisions", 4},
                            {"rings", 7},
                            {"center", {0.0, 0.54}}};
  j["bodies"][0]["initial_velocity"] = {0.0, -30.0};
  j["solver"]["t_end"] = 3.0e-3;
  j["output"] = {{"directory", "out/star"}, {"prefix", "star"}};
  j["benchmark"] = {{"kind", "star"}};
  return j;
}

}  // namespace

std::vector<std::string> builtin_case_names() {
  return {"hertz", "hertz-m2", "wedge",  "cone", "punch",
          "ironing", "bar1d",  "diamond", "star"};
}

bool is_builtin_case(const std::string& name) {
  for (const auto& n : builtin_case_names())
    if (n == name) return true;
  return false;
}

std::string builtin_case_json(const std::string& name) {
  json j;
  if (name == "hertz")
    j = hertz_case();
  else if (name == "hertz-m2")
    j = hertz_quadratic_case();
  else if (name == "wedge")
    j = wedge_case();
  else if (name == "cone")
    j = cone_case();
  else if (name == "punch")
    j = punch_case();
  else if (name == "ironing")
    j = ironing_case();
  else if (name == "bar1d")
    j = bar1d_case();
  else if (name == "diamond")
    j = diamond_case();
  else if (name == "star")
    j = star_case();
  else
    throw ConfigError("unknown built-in case '" + name + "'");
  return j.dump(2);
}

}  // namespace fcm::harness
