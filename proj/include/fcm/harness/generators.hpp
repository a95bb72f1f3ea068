#pragma once

#include <vector>

#include "fcm/fem/mesh.hpp"

namespace fcm::harness {

//! Monotone coordinate arrays for structured generators.
std::vector<double> uniform_coords(double a, double b, int n);
//! Spacing graded by t^power toward `b` (power > 1) or `a` (power < 1).
std::vector<double> power_coords(double a, double b, int n, double power);
//! Spacing clustered around the midpoint for power > 1.
std::vector<double> center_cluster_coords(double a, double b, int n,
                                          double power);

//! Structured rectangle with facet/node sets left/right/bottom/top.
fem::Mesh2 rect_block_2d(const std::vector<double>& xs,
                         const std::vector<double>& ys, fem::ElemType etype);

//! Half-disk of radius R centered on (0, R): flat top edge on y = R, curved
//! arc touching y = 0 at the origin. Triangles on a polar grid; spacing
//! clusters toward the arc and the bottom pole for contact resolution.
//! Sets: "top" (flat edge), "arc" (curved boundary), node set "pole".
fem::Mesh2 semicircle_2d(double radius, int n_radial, int n_angular,
                         double radial_power, double angular_power);

//! Square rotated 45 degrees (tips on the axes), structured quads.
//! Sets: "boundary" plus "bottom_tip"/"top_edge" node sets.
fem::Mesh2 diamond_2d(double half_diagonal, int n,
                      const Vec2& center = Vec2::Zero());

//! Five-pointed star meshed by scaled rings of its boundary polygon.
//! Sets: "boundary".
fem::Mesh2 star_2d(double r_outer, double r_inner, int subdivisions,
                   int n_rings, const Vec2& center = Vec2::Zero());

//! Structured tetrahedral box (each hex cell split into six tets).
//! Sets: xmin/xmax/ymin/ymax/zmin/zmax.
fem::Mesh3 box_tet_3d(const std::vector<double>& xs,
                      const std::vector<double>& ys,
                      const std::vector<double>& zs);

}  // namespace fcm::harness
