#pragma once

#include <string>

#include "fcm/fem/assembly.hpp"

namespace fcm::io {

//! Legacy ASCII VTK (version 3.0) unstructured-grid snapshot: reference
//! points, displacement/velocity point vectors, von Mises and Cauchy
//! tensors per cell.
template <int D>
void write_vtk(const std::string& path, const fem::Mesh<D>& mesh,
               const VecX& displacement, const VecX& velocity,
               const std::vector<fem::ElementStress>& stress,
               const std::string& title = "snapshot");

}  // namespace fcm::io
