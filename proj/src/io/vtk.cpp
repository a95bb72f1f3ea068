#include "fcm/io/vtk.hpp"

#include <fstream>

#include "fcm/io/csv.hpp"

namespace fcm::io {

namespace {

int vtk_cell_type(fem::ElemType t) {
  switch (t) {
    case fem::ElemType::Tri3: return 5;
    case fem::ElemType::Quad4: return 9;
    case fem::ElemType::Tet4: return 10;
  }
  return 0;
}

std::string g(double v) { return CsvWriter::format(v); }

}  // namespace

template <int D>
void write_vtk(const std::string& path, const fem::Mesh<D>& mesh,
               const VecX& displacement, const VecX& velocity,
               const std::vector<fem::ElementStress>& stress,
               const std::string& title) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_nodes() << " double\n";
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const auto& p = mesh.nodes[n];
    out << g(p[0]) << " " << g(p[1]) << " " << g(D == 3 ? p[D - 1] : 0.0)
        << "\n";
  }
  const int npe = mesh.npe();
  out << "CELLS " << mesh.n_elems() << " " << mesh.n_elems() * (npe + 1)
      << "\n";
  for (int e = 0; e < mesh.n_elems(); ++e) {
    out << npe;
    for (int a = 0; a < npe; ++a) out << " " << mesh.node_of(e, a);
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.n_elems() << "\n";
  for (int e = 0; e < mesh.n_elems(); ++e)
    out << vtk_cell_type(mesh.etype) << "\n";

  const auto vec3 = [&](const VecX& field, int n) {
    out << g(field[fem::Mesh<D>::dof(n, 0)]) << " "
        << g(field[fem::Mesh<D>::dof(n, 1)]) << " "
        << g(D == 3 ? field[fem::Mesh<D>::dof(n, D - 1)] : 0.0) << "\n";
  };
  out << "POINT_DATA " << mesh.n_nodes() << "\n";
  out << "VECTORS displacement double\n";
  for (int n = 0; n < mesh.n_nodes(); ++n) vec3(displacement, n);
  out << "VECTORS velocity double\n";
  for (int n = 0; n < mesh.n_nodes(); ++n) vec3(velocity, n);

  out << "CELL_DATA " << mesh.n_elems() << "\n";
  out << "SCALARS von_mises double 1\nLOOKUP_TABLE default\n";
  for (const auto& s : stress) out << g(s.von_mises) << "\n";
  out << "TENSORS cauchy double\n";
  for (const auto& s : stress) {
    for (int i = 0; i < 3; ++i) {
      out << g(s.cauchy(i, 0)) << " " << g(s.cauchy(i, 1)) << " "
          << g(s.cauchy(i, 2)) << "\n";
    }
    out << "\n";
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

template void write_vtk<2>(const std::string&, const fem::Mesh<2>&,
                           const VecX&, const VecX&,
                           const std::vector<fem::ElementStress>&,
                           const std::string&);
template void write_vtk<3>(const std::string&, const fem::Mesh<3>&,
                           const VecX&, const VecX&,
                           const std::vector<fem::ElementStress>&,
                           const std::string&);

}  // namespace fcm::io
