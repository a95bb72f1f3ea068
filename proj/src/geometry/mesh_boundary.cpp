#include "fcm/geometry/mesh_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fcm/geometry/closest_point.hpp"

namespace fcm::geo {

namespace {

template <int D>
void check_not_inverted(const fem::Mesh<D>& mesh, const VecX& d) {
  for (int e = 0; e < mesh.n_elems(); ++e) {
    double vol = 0.0;
    if constexpr (D == 2) {
      const Vec2 a = mesh.deformed_node(mesh.node_of(e, 0), d);
      const Vec2 b = mesh.deformed_node(mesh.node_of(e, 1), d);
      const Vec2 c = mesh.deformed_node(mesh.node_of(e, 2), d);
      vol = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
      if (mesh.etype == fem::ElemType::Quad4) {
        const Vec2 q = mesh.deformed_node(mesh.node_of(e, 3), d);
        const double t2 =
            (c - a).x() * (q - a).y() - (c - a).y() * (q - a).x();
        vol = std::min(vol, t2);
      }
    } else {
      const Vec3 a = mesh.deformed_node(mesh.node_of(e, 0), d);
      const Vec3 b = mesh.deformed_node(mesh.node_of(e, 1), d);
      const Vec3 c = mesh.deformed_node(mesh.node_of(e, 2), d);
      const Vec3 q = mesh.deformed_node(mesh.node_of(e, 3), d);
      vol = (b - a).cross(c - a).dot(q - a);
    }
    if (!(vol > 0.0))
      throw SolverError("deformed boundary is inverted at element " +
                        std::to_string(e));
  }
}

}  // namespace

template <int D>
MeshBoundarySdf<D>::MeshBoundarySdf(const fem::Mesh<D>& mesh, const VecX& d,
                                    const Vec<D>& origin)
    : mesh_(&mesh) {
  if (mesh.facets.empty())
    throw ConfigError("mesh boundary is empty; extract_boundary() first");
  if (d.size() != mesh.n_dofs())
    throw ConfigError("displacement vector size does not match mesh dofs");
  check_not_inverted(mesh, d);

  const int nf = static_cast<int>(mesh.facets.size());
  facets_.resize(nf);
  double diam_sum = 0.0;

  if constexpr (D == 2) {
    // Per-node pseudonormal: normalized sum of the two incident edge normals.
    std::map<int, Vec2> vnorm;
    for (int i = 0; i < nf; ++i) {
      const auto& f = mesh.facets[i];
      const Vec2 a = mesh.deformed_node(f[0], d) - origin;
      const Vec2 b = mesh.deformed_node(f[1], d) - origin;
      const Vec2 e = b - a;
      const double len = e.norm();
      if (!(len > 0.0)) throw ConfigError("degenerate boundary facet");
      const Vec2 n(e.y() / len, -e.x() / len);
      vnorm[f[0]] += n;
      vnorm[f[1]] += n;
      auto& fd = facets_[i];
      fd.p[0] = a;
      fd.p[1] = b;
      fd.normal = n;
      fd.node[0] = f[0];
      fd.node[1] = f[1];
      bbox_.absorb(a);
      bbox_.absorb(b);
      diam_sum += len;
    }
    for (auto& [n, v] : vnorm) v.normalize();
    for (int i = 0; i < nf; ++i) {
      facets_[i].vnormal[0] = vnorm[facets_[i].node[0]];
      facets_[i].vnormal[1] = vnorm[facets_[i].node[1]];
    }
  } else {
    // Angle-weighted vertex pseudonormals and edge pseudonormals
    // (sum of the two incident face normals).
    std::map<int, Vec3> vnorm;
    std::map<std::pair<int, int>, Vec3> enorm;
    for (int i = 0; i < nf; ++i) {
      const auto& f = mesh.facets[i];
      auto& fd = facets_[i];
      for (int k = 0; k < 3; ++k) {
        fd.p[k] = mesh.deformed_node(f[k], d) - origin;
        fd.node[k] = f[k];
        bbox_.absorb(fd.p[k]);
      }
      Vec3 n = (fd.p[1] - fd.p[0]).cross(fd.p[2] - fd.p[0]);
      const double n2 = n.norm();
      if (!(n2 > 0.0)) throw ConfigError("degenerate boundary facet");
      n /= n2;
      fd.normal = n;
      double maxedge = 0.0;
      for (int k = 0; k < 3; ++k) {
        const Vec3 u = (fd.p[(k + 1) % 3] - fd.p[k]).normalized();
        const Vec3 v = (fd.p[(k + 2) % 3] - fd.p[k]).normalized();
        const double ang =
            std::acos(std::clamp(u.dot(v), -1.0, 1.0));
        vnorm[f[k]] += ang * n;
        int a = f[(k + 1) % 3], b = f[(k + 2) % 3];
        if (a > b) std::swap(a, b);
        enorm[{a, b}] += n;
        maxedge = std::max(maxedge, (fd.p[(k + 1) % 3] - fd.p[k]).norm());
      }
      diam_sum += maxedge;
    }
    for (auto& [n, v] : vnorm) v.normalize();
    for (auto& [e, v] : enorm) v.normalize();
    for (int i = 0; i < nf; ++i) {
      auto& fd = facets_[i];
      for (int k = 0; k < 3; ++k) {
        fd.vnormal[k] = vnorm[fd.node[k]];
        int a = fd.node[(k + 1) % 3], b = fd.node[(k + 2) % 3];
        if (a > b) std::swap(a, b);
        fd.enormal[k] = enorm[{a, b}];  // edge opposite vertex k
      }
    }
  }

  mean_diam_ = diam_sum / nf;
  degenerate_tol_ = 1e-12 * bbox_.extent().norm();
  build_grid();
}

template <int D>
void MeshBoundarySdf<D>::build_grid() {
  // Cell size: twice the mean facet diameter; fiber queries dominate, so
  // a few facets per cell is the sweet spot. Dimensions are capped to keep
  // memory bounded for extreme aspect ratios.
  cell_size_ = 2.0 * mean_diam_;
  const Vec<D> ext = bbox_.extent();
  constexpr int kMaxDim = D == 2 ? 1024 : 128;
  for (int k = 0; k < D; ++k)
    cell_size_ = std::max(cell_size_, ext[k] / kMaxDim);
  grid_origin_ = bbox_.lo - Vec<D>::Constant(0.5 * cell_size_);
  int total = 1;
  for (int k = 0; k < D; ++k) {
    dims_[k] = std::max(
        1, static_cast<int>(std::ceil((ext[k] + cell_size_) / cell_size_)));
    total *= dims_[k];
  }

  std::vector<std::vector<int>> cells(total);
  for (int i = 0; i < static_cast<int>(facets_.size()); ++i) {
    Box<D> fb;
    for (int k = 0; k < D; ++k) fb.absorb(facets_[i].p[k]);
    Eigen::Array<int, D, 1> lo, hi;
    for (int k = 0; k < D; ++k) {
      lo[k] = std::clamp(
          static_cast<int>(std::floor((fb.lo[k] - grid_origin_[k]) / cell_size_)),
          0, dims_[k] - 1);
      hi[k] = std::clamp(
          static_cast<int>(std::floor((fb.hi[k] - grid_origin_[k]) / cell_size_)),
          0, dims_[k] - 1);
    }
    Eigen::Array<int, D, 1> c = lo;
    while (true) {
      cells[cell_index(c)].push_back(i);
      int k = 0;
      for (; k < D; ++k) {
        if (++c[k] <= hi[k]) break;
        c[k] = lo[k];
      }
      if (k == D) break;
    }
  }

  cell_start_.assign(total + 1, 0);
  for (int c = 0; c < total; ++c)
    cell_start_[c + 1] = cell_start_[c] + static_cast<int>(cells[c].size());
  cell_items_.resize(cell_start_.back());
  for (int c = 0; c < total; ++c)
    std::copy(cells[c].begin(), cells[c].end(),
              cell_items_.begin() + cell_start_[c]);
}

template <int D>
int MeshBoundarySdf<D>::cell_index(const Eigen::Array<int, D, 1>& c) const {
  if constexpr (D == 2)
    return c[1] * dims_[0] + c[0];
  else
    return (c[2] * dims_[1] + c[1]) * dims_[0] + c[0];
}

template <int D>
void MeshBoundarySdf<D>::scan_cell(const Vec<D>& x, int cell, double& best2,
                                   int& best) const {
  for (int it = cell_start_[cell]; it < cell_start_[cell + 1]; ++it) {
    const int i = cell_items_[it];
    const auto& fd = facets_[i];
    double d2;
    if constexpr (D == 2) {
      d2 = (x - closest_point_segment<2>(x, fd.p[0], fd.p[1]).point)
               .squaredNorm();
    } else {
      d2 = (x - closest_point_triangle(x, fd.p[0], fd.p[1], fd.p[2]).point)
               .squaredNorm();
    }
    if (d2 < best2 || (d2 == best2 && i < best)) {
      best2 = d2;
      best = i;
    }
  }
}

template <int D>
typename MeshBoundarySdf<D>::Nearest MeshBoundarySdf<D>::nearest(
    const Vec<D>& x) const {
  // Clamp to the grid; the projection inequality
  //   dist(x, y)^2 >= d_out^2 + dist(xc, y)^2  for y in the grid box
  // gives a valid ring-search stopping bound.
  Vec<D> xc = x;
  Eigen::Array<int, D, 1> c;
  for (int k = 0; k < D; ++k) {
    xc[k] = std::clamp(xc[k], grid_origin_[k],
                       grid_origin_[k] + dims_[k] * cell_size_);
    c[k] = std::clamp(
        static_cast<int>(std::floor((xc[k] - grid_origin_[k]) / cell_size_)),
        0, dims_[k] - 1);
  }
  const double dout2 = (x - xc).squaredNorm();

  double best2 = std::numeric_limits<double>::infinity();
  int best = -1;
  const int max_ring = dims_.maxCoeff();
  for (int ring = 0; ring <= max_ring; ++ring) {
    if (ring > 0 && best >= 0) {
      // Unvisited cells lie outside the block of cells within Chebyshev
      // ring-1 of c; their distance to x is at least the distance to that
      // block's boundary (and at least the clamped-projection bound).
      double lb_face = std::numeric_limits<double>::infinity();
      for (int k = 0; k < D; ++k) {
        const double lo = grid_origin_[k] + (c[k] - (ring - 1)) * cell_size_;
        const double hi = grid_origin_[k] + (c[k] + ring) * cell_size_;
        lb_face = std::min(lb_face, std::min(x[k] - lo, hi - x[k]));
      }
      lb_face = std::max(lb_face, 0.0);
      const double lb_proj = (ring - 1) * cell_size_;
      const double lb2 =
          std::max(lb_face * lb_face, dout2 + lb_proj * lb_proj);
      if (best2 <= lb2) break;
    }
    // Cells at Chebyshev distance `ring` from c.
    Eigen::Array<int, D, 1> lo = c - ring, hi = c + ring;
    Eigen::Array<int, D, 1> cc;
    if constexpr (D == 2) {
      for (cc[1] = std::max(lo[1], 0); cc[1] <= std::min(hi[1], dims_[1] - 1);
           ++cc[1])
        for (cc[0] = std::max(lo[0], 0);
             cc[0] <= std::min(hi[0], dims_[0] - 1); ++cc[0]) {
          if ((cc - c).abs().maxCoeff() != ring) continue;
          scan_cell(x, cell_index(cc), best2, best);
        }
    } else {
      for (cc[2] = std::max(lo[2], 0); cc[2] <= std::min(hi[2], dims_[2] - 1);
           ++cc[2])
        for (cc[1] = std::max(lo[1], 0);
             cc[1] <= std::min(hi[1], dims_[1] - 1); ++cc[1])
          for (cc[0] = std::max(lo[0], 0);
               cc[0] <= std::min(hi[0], dims_[0] - 1); ++cc[0]) {
            if ((cc - c).abs().maxCoeff() != ring) continue;
            scan_cell(x, cell_index(cc), best2, best);
          }
    }
  }

  Nearest out;
  out.facet = best;
  const auto& fd = facets_[best];
  if constexpr (D == 2) {
    const auto cp = closest_point_segment<2>(x, fd.p[0], fd.p[1]);
    out.closest = cp.point;
    out.w[0] = 1.0 - cp.t;
    out.w[1] = cp.t;
    if (cp.t <= 0.0)
      out.feature_normal = fd.vnormal[0];
    else if (cp.t >= 1.0)
      out.feature_normal = fd.vnormal[1];
    else
      out.feature_normal = fd.normal;
  } else {
    const auto cp = closest_point_triangle(x, fd.p[0], fd.p[1], fd.p[2]);
    out.closest = cp.point;
    int zeros = 0, zero_at = -1, one_at = -1;
    for (int k = 0; k < 3; ++k) {
      out.w[k] = cp.w[k];
      if (cp.w[k] == 0.0) {
        ++zeros;
        zero_at = k;
      }
      if (cp.w[k] == 1.0) one_at = k;
    }
    if (zeros == 0)
      out.feature_normal = fd.normal;
    else if (zeros == 1)
      out.feature_normal = fd.enormal[zero_at];
    else
      out.feature_normal = fd.vnormal[one_at];
  }
  out.dist = (x - out.closest).norm();
  out.sign = (x - out.closest).dot(out.feature_normal) >= 0.0 ? 1.0 : -1.0;
  return out;
}

template <int D>
double MeshBoundarySdf<D>::value(const Vec<D>& x) const {
  const Nearest n = nearest(x);
  return n.sign * n.dist;
}

template <int D>
Vec<D> MeshBoundarySdf<D>::gradient(const Vec<D>& x) const {
  const Nearest n = nearest(x);
  if (n.dist > degenerate_tol_) return n.sign * (x - n.closest) / n.dist;
  return n.feature_normal;  // on-boundary limit
}

template <int D>
void MeshBoundarySdf<D>::nodal_jacobian(const Vec<D>& x,
                                        std::vector<JacobianEntry>& out) const {
  const Nearest n = nearest(x);
  Vec<D> g;
  if (n.dist > degenerate_tol_)
    g = n.sign * (x - n.closest) / n.dist;
  else
    g = n.feature_normal;
  // phi = sign * |x - sum_k w_k p_k|; moving a facet node by delta moves the
  // closest point by w_k delta (tangential drift does not contribute), so
  // d(phi)/d(p_k) = -w_k * grad_x(phi).
  out.clear();
  const auto& fd = facets_[n.facet];
  for (int k = 0; k < D; ++k) {
    if (n.w[k] == 0.0) continue;
    out.push_back({fd.node[k], Vec<D>(-n.w[k] * g)});
  }
}

template class MeshBoundarySdf<2>;
template class MeshBoundarySdf<3>;

}  // namespace fcm::geo
