#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fcm/types.hpp"

namespace fcm::fem {

enum class ElemType { Tri3, Quad4, Tet4 };

inline int nodes_per_elem(ElemType t) {
  switch (t) {
    case ElemType::Tri3: return 3;
    case ElemType::Quad4: return 4;
    case ElemType::Tet4: return 4;
  }
  return 0;
}

inline const char* elem_type_name(ElemType t) {
  switch (t) {
    case ElemType::Tri3: return "tri3";
    case ElemType::Quad4: return "quad4";
    case ElemType::Tet4: return "tet4";
  }
  return "?";
}

//! Finite element mesh: reference coordinates, single-type connectivity,
//! outward-oriented boundary facets (segments in 2D, triangles in 3D),
//! and named node/facet sets for boundary conditions.
template <int D>
struct Mesh {
  static_assert(D == 2 || D == 3);
  using Facet = std::array<int, D>;

  ElemType etype = D == 2 ? ElemType::Tri3 : ElemType::Tet4;
  std::vector<Vec<D>> nodes;
  std::vector<int> conn;  // flat connectivity, nodes_per_elem entries each

  std::vector<Facet> facets;  // boundary facets, outward orientation
  std::map<std::string, std::vector<int>> node_sets;
  std::map<std::string, std::vector<int>> facet_sets;  // indices into facets

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int npe() const { return nodes_per_elem(etype); }
  int n_elems() const { return static_cast<int>(conn.size()) / npe(); }
  int n_dofs() const { return D * n_nodes(); }
  int node_of(int e, int a) const { return conn[e * npe() + a]; }
  static int dof(int node, int comp) { return node * D + comp; }

  //! Extracts the boundary (element faces used exactly once), orients each
  //! facet outward, and validates closure. Call after building nodes/conn.
  void extract_boundary();

  //! Checks reference-configuration element volumes/areas are positive.
  void validate() const;

  double min_edge_length() const;
  double reference_volume() const;
  double facet_measure(const Facet& f) const;
  double facet_measure_deformed(const Facet& f, const VecX& d) const;
  Vec<D> deformed_node(int n, const VecX& d) const {
    Vec<D> x = nodes[n];
    for (int k = 0; k < D; ++k) x[k] += d[dof(n, k)];
    return x;
  }

  const std::vector<int>& node_set(const std::string& name) const {
    auto it = node_sets.find(name);
    if (it == node_sets.end())
      throw ConfigError("unknown node set '" + name + "'");
    return it->second;
  }
  const std::vector<int>& facet_set(const std::string& name) const {
    auto it = facet_sets.find(name);
    if (it == facet_sets.end())
      throw ConfigError("unknown facet set '" + name + "'");
    return it->second;
  }
};

using Mesh2 = Mesh<2>;
using Mesh3 = Mesh<3>;

}  // namespace fcm::fem
