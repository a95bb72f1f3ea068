#include "fcm/fem/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <map>

namespace fcm::fem {

namespace {

// Faces of an element in local node indices.
template <int D>
std::vector<std::array<int, D>> local_faces(ElemType t);

template <>
std::vector<std::array<int, 2>> local_faces<2>(ElemType t) {
  if (t == ElemType::Tri3) return {{0, 1}, {1, 2}, {2, 0}};
  return {{0, 1}, {1, 2}, {2, 3}, {3, 0}};  // Quad4
}

template <>
std::vector<std::array<int, 3>> local_faces<3>(ElemType t) {
  if (t != ElemType::Tet4) throw ConfigError("3D mesh requires tet4 elements");
  return {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
}

template <int D>
Vec<D> facet_normal_unnormalized(const Mesh<D>& m,
                                 const typename Mesh<D>::Facet& f) {
  if constexpr (D == 2) {
    const Vec2 e = m.nodes[f[1]] - m.nodes[f[0]];
    return Vec2(e.y(), -e.x());
  } else {
    return (m.nodes[f[1]] - m.nodes[f[0]])
        .cross(m.nodes[f[2]] - m.nodes[f[0]]);
  }
}

}  // namespace

template <int D>
void Mesh<D>::extract_boundary() {
  facets.clear();
  const auto lf = local_faces<D>(etype);
  std::map<std::array<int, D>, std::pair<Facet, int>> count;  // key -> (facet, uses)
  for (int e = 0; e < n_elems(); ++e) {
    for (const auto& loc : lf) {
      Facet f;
      for (int k = 0; k < D; ++k) f[k] = node_of(e, loc[k]);
      std::array<int, D> key = f;
      std::sort(key.begin(), key.end());
      auto [it, fresh] = count.try_emplace(key, std::make_pair(f, 0));
      it->second.second += 1;
      if (fresh) {
        // Remember the owning element so orientation can be fixed outward.
        Vec<D> ec = Vec<D>::Zero();
        for (int a = 0; a < npe(); ++a) ec += nodes[node_of(e, a)];
        ec /= npe();
        Vec<D> fc = Vec<D>::Zero();
        for (int k = 0; k < D; ++k) fc += nodes[f[k]];
        fc /= D;
        Facet& stored = it->second.first;
        if (facet_normal_unnormalized(*this, stored).dot(fc - ec) < 0.0) {
          if constexpr (D == 2)
            std::swap(stored[0], stored[1]);
          else
            std::swap(stored[1], stored[2]);
        }
      }
    }
  }
  for (const auto& [key, val] : count) {
    if (val.second == 1) facets.push_back(val.first);
    if (val.second > 2)
      throw ConfigError("non-manifold mesh: a face is shared by >2 elements");
  }

  // Closure check: in 2D each boundary node is touched by exactly two
  // boundary edges; in 3D each boundary edge by exactly two triangles.
  if constexpr (D == 2) {
    std::map<int, int> uses;
    for (const auto& f : facets) {
      uses[f[0]]++;
      uses[f[1]]++;
    }
    for (const auto& [n, c] : uses)
      if (c != 2)
        throw ConfigError("boundary is not closed at node " +
                          std::to_string(n));
  } else {
    std::map<std::pair<int, int>, int> uses;
    for (const auto& f : facets)
      for (int k = 0; k < 3; ++k) {
        int a = f[k], b = f[(k + 1) % 3];
        if (a > b) std::swap(a, b);
        uses[{a, b}]++;
      }
    for (const auto& [e, c] : uses)
      if (c != 2) throw ConfigError("boundary surface is not closed");
  }
}

template <int D>
void Mesh<D>::validate() const {
  if (nodes.empty() || conn.empty()) throw ConfigError("empty mesh");
  for (int c : conn)
    if (c < 0 || c >= n_nodes())
      throw ConfigError("connectivity references missing node");
  for (int e = 0; e < n_elems(); ++e) {
    double vol = 0.0;
    if constexpr (D == 2) {
      if (etype == ElemType::Tri3) {
        const Vec2 a = nodes[node_of(e, 0)], b = nodes[node_of(e, 1)],
                   c = nodes[node_of(e, 2)];
        vol = 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
      } else {
        // Quad4: both diagonal triangles must be positive (convex, CCW).
        const Vec2 a = nodes[node_of(e, 0)], b = nodes[node_of(e, 1)],
                   c = nodes[node_of(e, 2)], d = nodes[node_of(e, 3)];
        const double t1 =
            0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
        const double t2 =
            0.5 * ((c - a).x() * (d - a).y() - (c - a).y() * (d - a).x());
        vol = std::min(t1, t2);
      }
    } else {
      const Vec3 a = nodes[node_of(e, 0)], b = nodes[node_of(e, 1)],
                 c = nodes[node_of(e, 2)], d = nodes[node_of(e, 3)];
      vol = (b - a).cross(c - a).dot(d - a) / 6.0;
    }
    if (!(vol > 0.0))
      throw ConfigError("element " + std::to_string(e) +
                        " has non-positive reference volume");
  }
}

template <int D>
double Mesh<D>::min_edge_length() const {
  const auto lf = local_faces<D>(etype);
  double best = std::numeric_limits<double>::infinity();
  for (int e = 0; e < n_elems(); ++e) {
    const int n = npe();
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        // Quad4: skip the diagonal, it is not an edge.
        if (etype == ElemType::Quad4 && (b - a) == 2) continue;
        best = std::min(best,
                        (nodes[node_of(e, a)] - nodes[node_of(e, b)]).norm());
      }
  }
  return best;
}

template <int D>
double Mesh<D>::reference_volume() const {
  double total = 0.0;
  for (int e = 0; e < n_elems(); ++e) {
    if constexpr (D == 2) {
      if (etype == ElemType::Tri3) {
        const Vec2 a = nodes[node_of(e, 0)], b = nodes[node_of(e, 1)],
                   c = nodes[node_of(e, 2)];
        total += 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
      } else {
        const Vec2 a = nodes[node_of(e, 0)], b = nodes[node_of(e, 1)],
                   c = nodes[node_of(e, 2)], d = nodes[node_of(e, 3)];
        total += 0.5 * std::abs((c - a).x() * (d - b).y() -
                                (c - a).y() * (d - b).x());
      }
    } else {
      const Vec3 a = nodes[node_of(e, 0)], b = nodes[node_of(e, 1)],
                 c = nodes[node_of(e, 2)], d = nodes[node_of(e, 3)];
      total += (b - a).cross(c - a).dot(d - a) / 6.0;
    }
  }
  return total;
}

template <int D>
double Mesh<D>::facet_measure(const Facet& f) const {
  if constexpr (D == 2) {
    return (nodes[f[1]] - nodes[f[0]]).norm();
  } else {
    return 0.5 * (nodes[f[1]] - nodes[f[0]])
                     .cross(nodes[f[2]] - nodes[f[0]])
                     .norm();
  }
}

template <int D>
double Mesh<D>::facet_measure_deformed(const Facet& f, const VecX& d) const {
  if constexpr (D == 2) {
    return (deformed_node(f[1], d) - deformed_node(f[0], d)).norm();
  } else {
    return 0.5 * (deformed_node(f[1], d) - deformed_node(f[0], d))
                     .cross(deformed_node(f[2], d) - deformed_node(f[0], d))
                     .norm();
  }
}

template struct Mesh<2>;
template struct Mesh<3>;

}  // namespace fcm::fem
