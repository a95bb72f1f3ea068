#pragma once

#include <string>

#include "fcm/fem/mesh.hpp"

namespace fcm::io {

//! Reads the plain ASCII mesh format:
//!
//!   fcmesh 1
//!   dim <2|3>
//!   nodes <count>
//!   <x y [z]> ...
//!   elements <count> <tri3|quad4|tet4>
//!   <0-based connectivity> ...
//!   nodeset <name> <count>
//!   <ids> ...
//!   facetset <name> <count>
//!   <facet node tuples> ...
//!   end
//!
//! Boundary facets are extracted from the elements; facet-set tuples are
//! matched against them regardless of node order.
template <int D>
fem::Mesh<D> read_native_mesh(const std::string& path);

template <int D>
void write_native_mesh(const std::string& path, const fem::Mesh<D>& mesh);

//! Dimension recorded in a native mesh file header.
int native_mesh_dim(const std::string& path);

//! Reads the Gmsh 2.2 ASCII subset: $MeshFormat 2.2, $Nodes, $Elements
//! with element types 2 (tri3), 3 (quad4), 4 (tet4) as the volume mesh and
//! types 1 (line2) / 2 (tri3, for tet meshes) as tagged boundary facets.
//! $PhysicalNames become node/facet set names.
template <int D>
fem::Mesh<D> read_gmsh_mesh(const std::string& path);

//! Dimension inferred from a Gmsh file (3 when tet4 elements exist).
int gmsh_mesh_dim(const std::string& path);

}  // namespace fcm::io
