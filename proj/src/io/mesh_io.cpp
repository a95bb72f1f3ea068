#include "fcm/io/mesh_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "fcm/io/csv.hpp"

namespace fcm::io {

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mesh file '" + path + "'");
  return in;
}

template <int D>
int facet_index_of(const fem::Mesh<D>& mesh,
                   std::array<int, D> key) {
  std::sort(key.begin(), key.end());
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    std::array<int, D> k = mesh.facets[f];
    std::sort(k.begin(), k.end());
    if (k == key) return f;
  }
  return -1;
}

fem::ElemType elem_type_from_name(const std::string& s) {
  if (s == "tri3") return fem::ElemType::Tri3;
  if (s == "quad4") return fem::ElemType::Quad4;
  if (s == "tet4") return fem::ElemType::Tet4;
  throw ConfigError("unknown element type '" + s + "'");
}

}  // namespace

int native_mesh_dim(const std::string& path) {
  auto in = open_or_throw(path);
  std::string magic;
  int version = 0, dim = 0;
  std::string key;
  in >> magic >> version >> key >> dim;
  if (magic != "fcmesh" || version != 1 || key != "dim")
    throw ConfigError("'" + path + "' is not an fcmesh 1 file");
  return dim;
}

template <int D>
fem::Mesh<D> read_native_mesh(const std::string& path) {
  auto in = open_or_throw(path);
  std::string magic, key;
  int version = 0, dim = 0;
  in >> magic >> version >> key >> dim;
  if (magic != "fcmesh" || version != 1 || key != "dim")
    throw ConfigError("'" + path + "' is not an fcmesh 1 file");
  if (dim != D)
    throw ConfigError("mesh '" + path + "' has dim " + std::to_string(dim));

  fem::Mesh<D> mesh;
  std::string section;
  std::vector<std::pair<std::string, std::vector<std::array<int, D>>>>
      facet_tuples;
  while (in >> section) {
    if (section == "end") break;
    if (section == "nodes") {
      int count = 0;
      in >> count;
      mesh.nodes.resize(count);
      for (int i = 0; i < count; ++i)
        for (int k = 0; k < D; ++k) in >> mesh.nodes[i][k];
    } else if (section == "elements") {
      int count = 0;
      std::string type;
      in >> count >> type;
      mesh.etype = elem_type_from_name(type);
      if ((D == 2) != (mesh.etype != fem::ElemType::Tet4))
        throw ConfigError("element type does not match mesh dimension");
      mesh.conn.resize(static_cast<std::size_t>(count) * mesh.npe());
      for (auto& c : mesh.conn) in >> c;
    } else if (section == "nodeset") {
      std::string name;
      int count = 0;
      in >> name >> count;
      auto& set = mesh.node_sets[name];
      set.resize(count);
      for (auto& v : set) in >> v;
    } else if (section == "facetset") {
      std::string name;
      int count = 0;
      in >> name >> count;
      std::vector<std::array<int, D>> tuples(count);
      for (auto& t : tuples)
        for (int k = 0; k < D; ++k) in >> t[k];
      facet_tuples.emplace_back(name, std::move(tuples));
    } else {
      throw ConfigError("unknown mesh section '" + section + "' in '" + path +
                        "'");
    }
    if (!in) throw ConfigError("truncated mesh file '" + path + "'");
  }
  if (mesh.nodes.empty() || mesh.conn.empty())
    throw ConfigError("mesh '" + path + "' is missing nodes or elements");
  mesh.validate();
  mesh.extract_boundary();
  for (auto& [name, tuples] : facet_tuples) {
    auto& set = mesh.facet_sets[name];
    for (const auto& t : tuples) {
      const int f = facet_index_of<D>(mesh, t);
      if (f < 0)
        throw ConfigError("facetset '" + name +
                          "' references a non-boundary facet in '" + path +
                          "'");
      set.push_back(f);
    }
  }
  return mesh;
}

template <int D>
void write_native_mesh(const std::string& path, const fem::Mesh<D>& mesh) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "fcmesh 1\ndim " << D << "\n";
  out << "nodes " << mesh.n_nodes() << "\n";
  for (const auto& p : mesh.nodes) {
    for (int k = 0; k < D; ++k) out << (k ? " " : "") << CsvWriter::format(p[k]);
    out << "\n";
  }
  out << "elements " << mesh.n_elems() << " " << fem::elem_type_name(mesh.etype)
      << "\n";
  for (int e = 0; e < mesh.n_elems(); ++e) {
    for (int a = 0; a < mesh.npe(); ++a)
      out << (a ? " " : "") << mesh.node_of(e, a);
    out << "\n";
  }
  for (const auto& [name, set] : mesh.node_sets) {
    out << "nodeset " << name << " " << set.size() << "\n";
    for (int v : set) out << v << "\n";
  }
  for (const auto& [name, set] : mesh.facet_sets) {
    out << "facetset " << name << " " << set.size() << "\n";
    for (int f : set) {
      for (int k = 0; k < D; ++k)
        out << (k ? " " : "") << mesh.facets[f][k];
      out << "\n";
    }
  }
  out << "end\n";
  if (!out) throw IoError("write failure on '" + path + "'");
}

namespace {

struct GmshData {
  std::map<int, Vec3> nodes;  // gmsh id -> coordinates
  struct Elem {
    int type;
    int physical;
    std::vector<int> nodes;
  };
  std::vector<Elem> elems;
  std::map<std::pair<int, int>, std::string> physical_names;  // (dim, id)
};

GmshData parse_gmsh(const std::string& path) {
  auto in = open_or_throw(path);
  GmshData g;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("$MeshFormat", 0) == 0) {
      double version = 0;
      int file_type = 0, data_size = 0;
      in >> version >> file_type >> data_size;
      if (version < 2.0 || version >= 3.0 || file_type != 0)
        throw ConfigError("'" + path + "': only Gmsh 2.2 ASCII is supported");
      std::getline(in, line);
    } else if (line.rfind("$PhysicalNames", 0) == 0) {
      int count = 0;
      in >> count;
      for (int i = 0; i < count; ++i) {
        int dim = 0, id = 0;
        std::string name;
        in >> dim >> id >> std::quoted(name);
        g.physical_names[{dim, id}] = name;
      }
      std::getline(in, line);
    } else if (line.rfind("$Nodes", 0) == 0) {
      int count = 0;
      in >> count;
      for (int i = 0; i < count; ++i) {
        int id = 0;
        Vec3 p;
        in >> id >> p.x() >> p.y() >> p.z();
        g.nodes[id] = p;
      }
      std::getline(in, line);
    } else if (line.rfind("$Elements", 0) == 0) {
      int count = 0;
      in >> count;
      std::getline(in, line);
      for (int i = 0; i < count; ++i) {
        std::getline(in, line);
        std::istringstream ls(line);
        int id = 0, type = 0, ntags = 0;
        ls >> id >> type >> ntags;
        GmshData::Elem e;
        e.type = type;
        e.physical = 0;
        for (int t = 0; t < ntags; ++t) {
          int tag = 0;
          ls >> tag;
          if (t == 0) e.physical = tag;
        }
        int n = 0;
        while (ls >> n) e.nodes.push_back(n);
        if (!e.nodes.empty()) g.elems.push_back(std::move(e));
      }
    }
  }
  if (g.nodes.empty() || g.elems.empty())
    throw ConfigError("'" + path + "': no nodes or elements found");
  return g;
}

}  // namespace

int gmsh_mesh_dim(const std::string& path) {
  const GmshData g = parse_gmsh(path);
  for (const auto& e : g.elems)
    if (e.type == 4) return 3;
  return 2;
}

template <int D>
fem::Mesh<D> read_gmsh_mesh(const std::string& path) {
  const GmshData g = parse_gmsh(path);

  const int volume_types[] = {2, 3};  // tri3, quad4
  const bool is3d = D == 3;

  // Renumber the gmsh node ids consecutively.
  std::map<int, int> renum;
  fem::Mesh<D> mesh;
  for (const auto& [id, p] : g.nodes) {
    renum[id] = static_cast<int>(mesh.nodes.size());
    Vec<D> q;
    for (int k = 0; k < D; ++k) q[k] = p[k];
    mesh.nodes.push_back(q);
  }

  int chosen_type = 0;
  for (const auto& e : g.elems) {
    const bool volume = is3d ? e.type == 4
                             : (e.type == volume_types[0] ||
                                e.type == volume_types[1]);
    if (!volume) continue;
    if (chosen_type == 0) chosen_type = e.type;
    if (e.type != chosen_type)
      throw ConfigError("'" + path +
                        "': mixed volume element types are not supported");
    for (int n : e.nodes) mesh.conn.push_back(renum.at(n));
  }
  if (chosen_type == 0)
    throw ConfigError("'" + path + "': no volume elements for dim " +
                      std::to_string(D));
  mesh.etype = chosen_type == 2   ? fem::ElemType::Tri3
               : chosen_type == 3 ? fem::ElemType::Quad4
                                  : fem::ElemType::Tet4;
  if (is3d) mesh.etype = fem::ElemType::Tet4;

  mesh.validate();
  mesh.extract_boundary();

  // Tagged lower-dimensional elements become facet and node sets.
  const int facet_type = is3d ? 2 : 1;
  for (const auto& e : g.elems) {
    if (e.type != facet_type || e.physical == 0) continue;
    auto it = g.physical_names.find({D - 1, e.physical});
    const std::string name = it != g.physical_names.end()
                                 ? it->second
                                 : "physical_" + std::to_string(e.physical);
    std::array<int, D> key;
    for (int k = 0; k < D; ++k) key[k] = renum.at(e.nodes[k]);
    const int f = facet_index_of<D>(mesh, key);
    if (f < 0)
      throw ConfigError("'" + path + "': tagged facet is not on the boundary");
    mesh.facet_sets[name].push_back(f);
    for (int k = 0; k < D; ++k) mesh.node_sets[name].push_back(key[k]);
  }
  for (auto& [name, set] : mesh.node_sets) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  return mesh;
}

template fem::Mesh<2> read_native_mesh<2>(const std::string&);
template fem::Mesh<3> read_native_mesh<3>(const std::string&);
template void write_native_mesh<2>(const std::string&, const fem::Mesh<2>&);
template void write_native_mesh<3>(const std::string&, const fem::Mesh<3>&);
template fem::Mesh<2> read_gmsh_mesh<2>(const std::string&);
template fem::Mesh<3> read_gmsh_mesh<3>(const std::string&);

}  // namespace fcm::io
