#include "fcm/harness/generators.hpp"

#include <cmath>

namespace fcm::harness {

using fem::ElemType;
using fem::Mesh2;
using fem::Mesh3;

std::vector<double> uniform_coords(double a, double b, int n) {
  std::vector<double> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = a + (b - a) * i / n;
  return c;
}

std::vector<double> power_coords(double a, double b, int n, double power) {
  std::vector<double> c(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    c[i] = b - (b - a) * std::pow(1.0 - t, power);
  }
  c.front() = a;
  c.back() = b;
  return c;
}

std::vector<double> center_cluster_coords(double a, double b, int n,
                                          double power) {
  std::vector<double> c(n + 1);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i <= n; ++i) {
    const double u = 2.0 * i / n - 1.0;
    c[i] = mid + half * (u < 0 ? -1.0 : 1.0) * std::pow(std::abs(u), power);
  }
  c.front() = a;
  c.back() = b;
  return c;
}

namespace {

void add_geometric_sets_2d(Mesh2& mesh, double xlo, double xhi, double ylo,
                           double yhi) {
  const double tol = 1e-9 * (std::abs(xhi - xlo) + std::abs(yhi - ylo) + 1.0);
  auto& ns = mesh.node_sets;
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const Vec2& p = mesh.nodes[n];
    if (std::abs(p.x() - xlo) < tol) ns["left"].push_back(n);
    if (std::abs(p.x() - xhi) < tol) ns["right"].push_back(n);
    if (std::abs(p.y() - ylo) < tol) ns["bottom"].push_back(n);
    if (std::abs(p.y() - yhi) < tol) ns["top"].push_back(n);
  }
  auto& fs = mesh.facet_sets;
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    const Vec2 a = mesh.nodes[mesh.facets[f][0]];
    const Vec2 b = mesh.nodes[mesh.facets[f][1]];
    if (std::abs(a.x() - xlo) < tol && std::abs(b.x() - xlo) < tol)
      fs["left"].push_back(f);
    if (std::abs(a.x() - xhi) < tol && std::abs(b.x() - xhi) < tol)
      fs["right"].push_back(f);
    if (std::abs(a.y() - ylo) < tol && std::abs(b.y() - ylo) < tol)
      fs["bottom"].push_back(f);
    if (std::abs(a.y() - yhi) < tol && std::abs(b.y() - yhi) < tol)
      fs["top"].push_back(f);
  }
}

}  // namespace

Mesh2 rect_block_2d(const std::vector<double>& xs,
                    const std::vector<double>& ys, ElemType etype) {
  if (xs.size() < 2 || ys.size() < 2)
    throw ConfigError("rect_block_2d: need at least two coordinates per axis");
  Mesh2 mesh;
  mesh.etype = etype;
  const int nx = static_cast<int>(xs.size()) - 1;
  const int ny = static_cast<int>(ys.size()) - 1;
  const auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) mesh.nodes.push_back(Vec2(xs[i], ys[j]));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1),
                d = id(i, j + 1);
      if (etype == ElemType::Quad4) {
        mesh.conn.insert(mesh.conn.end(), {a, b, c, d});
      } else {
        // Alternate the diagonal for an unbiased triangle pattern.
        if ((i + j) % 2 == 0) {
          mesh.conn.insert(mesh.conn.end(), {a, b, c});
          mesh.conn.insert(mesh.conn.end(), {a, c, d});
        } else {
          mesh.conn.insert(mesh.conn.end(), {a, b, d});
          mesh.conn.insert(mesh.conn.end(), {b, c, d});
        }
      }
    }
  mesh.validate();
  mesh.extract_boundary();
  add_geometric_sets_2d(mesh, xs.front(), xs.back(), ys.front(), ys.back());
  return mesh;
}

Mesh2 semicircle_2d(double radius, int n_radial, int n_angular,
                    double radial_power, double angular_power) {
  if (radius <= 0.0 || n_radial < 2 || n_angular < 2)
    throw ConfigError("semicircle_2d: bad parameters");
  Mesh2 mesh;
  mesh.etype = ElemType::Tri3;
  const Vec2 center(0.0, radius);

  const std::vector<double> rs =
      power_coords(0.0, radius, n_radial, radial_power);
  const std::vector<double> phis =
      center_cluster_coords(-kPi / 2, kPi / 2, n_angular, angular_power);

  // Node 0 at the center; rings i = 1..n_radial.
  mesh.nodes.push_back(center);
  const auto id = [&](int i, int j) { return 1 + (i - 1) * (n_angular + 1) + j; };
  for (int i = 1; i <= n_radial; ++i)
    for (int j = 0; j <= n_angular; ++j)
      mesh.nodes.push_back(center + rs[i] * Vec2(std::sin(phis[j]),
                                                 -std::cos(phis[j])));
  // Inner fan.
  for (int j = 0; j < n_angular; ++j)
    mesh.conn.insert(mesh.conn.end(), {0, id(1, j), id(1, j + 1)});
  // Ring quads split to triangles.
  for (int i = 1; i < n_radial; ++i)
    for (int j = 0; j < n_angular; ++j) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1),
                d = id(i, j + 1);
      mesh.conn.insert(mesh.conn.end(), {a, b, c});
      mesh.conn.insert(mesh.conn.end(), {a, c, d});
    }
  mesh.validate();
  mesh.extract_boundary();

  const double tol = 1e-9 * radius;
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    const Vec2 a = mesh.nodes[mesh.facets[f][0]];
    const Vec2 b = mesh.nodes[mesh.facets[f][1]];
    const bool on_top =
        std::abs(a.y() - radius) < tol && std::abs(b.y() - radius) < tol;
    mesh.facet_sets[on_top ? "top" : "arc"].push_back(f);
    auto& nodes = mesh.node_sets[on_top ? "top" : "arc"];
    for (int k = 0; k < 2; ++k) nodes.push_back(mesh.facets[f][k]);
  }
  for (auto& [name, set] : mesh.node_sets) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  for (int n = 0; n < mesh.n_nodes(); ++n)
    if (mesh.nodes[n].norm() < tol) mesh.node_sets["pole"].push_back(n);
  return mesh;
}

Mesh2 diamond_2d(double half_diagonal, int n, const Vec2& center) {
  if (half_diagonal <= 0.0 || n < 1) throw ConfigError("diamond_2d: bad parameters");
  const double side = half_diagonal / std::sqrt(2.0);
  Mesh2 mesh = rect_block_2d(uniform_coords(-side, side, n),
                             uniform_coords(-side, side, n), ElemType::Quad4);
  const double c = std::sqrt(0.5);
  for (auto& p : mesh.nodes)
    p = center + Vec2(c * (p.x() - p.y()), c * (p.x() + p.y()));
  mesh.node_sets.clear();
  mesh.facet_sets.clear();
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f)
    mesh.facet_sets["boundary"].push_back(f);
  const double tol = 1e-9 * half_diagonal;
  for (int node = 0; node < mesh.n_nodes(); ++node) {
    if ((mesh.nodes[node] - (center + Vec2(0.0, -half_diagonal))).norm() < tol)
      mesh.node_sets["bottom_tip"].push_back(node);
  }
  return mesh;
}

Mesh2 star_2d(double r_outer, double r_inner, int subdivisions, int n_rings,
              const Vec2& center) {
  if (!(r_outer > r_inner && r_inner > 0.0) || subdivisions < 1 || n_rings < 1)
    throw ConfigError("star_2d: bad parameters");
  // Boundary polyline: 10 star vertices, each edge subdivided.
  std::vector<Vec2> ring;
  for (int v = 0; v < 10; ++v) {
    const double ang0 = kPi / 2 + v * kPi / 5;
    const double ang1 = kPi / 2 + (v + 1) * kPi / 5;
    const double r0 = v % 2 == 0 ? r_outer : r_inner;
    const double r1 = v % 2 == 0 ? r_inner : r_outer;
    const Vec2 p0 = r0 * Vec2(std::cos(ang0), std::sin(ang0));
    const Vec2 p1 = r1 * Vec2(std::cos(ang1), std::sin(ang1));
    for (int s = 0; s < subdivisions; ++s)
      ring.push_back(p0 + (p1 - p0) * (static_cast<double>(s) / subdivisions));
  }
  const int nb = static_cast<int>(ring.size());

  Mesh2 mesh;
  mesh.etype = ElemType::Tri3;
  mesh.nodes.push_back(center);
  const auto id = [&](int i, int j) { return 1 + (i - 1) * nb + (j % nb); };
  for (int i = 1; i <= n_rings; ++i) {
    const double scale = static_cast<double>(i) / n_rings;
    for (int j = 0; j < nb; ++j)
      mesh.nodes.push_back(center + scale * ring[j]);
  }
  for (int j = 0; j < nb; ++j)
    mesh.conn.insert(mesh.conn.end(), {0, id(1, j), id(1, j + 1)});
  for (int i = 1; i < n_rings; ++i)
    for (int j = 0; j < nb; ++j) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1),
                d = id(i, j + 1);
      mesh.conn.insert(mesh.conn.end(), {a, b, c});
      mesh.conn.insert(mesh.conn.end(), {a, c, d});
    }
  mesh.validate();
  mesh.extract_boundary();
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f)
    mesh.facet_sets["boundary"].push_back(f);
  return mesh;
}

Mesh3 box_tet_3d(const std::vector<double>& xs, const std::vector<double>& ys,
                 const std::vector<double>& zs) {
  if (xs.size() < 2 || ys.size() < 2 || zs.size() < 2)
    throw ConfigError("box_tet_3d: need at least two coordinates per axis");
  Mesh3 mesh;
  mesh.etype = ElemType::Tet4;
  const int nx = static_cast<int>(xs.size()) - 1;
  const int ny = static_cast<int>(ys.size()) - 1;
  const int nz = static_cast<int>(zs.size()) - 1;
  const auto id = [&](int i, int j, int k) {
    return (k * (ny + 1) + j) * (nx + 1) + i;
  };
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.nodes.push_back(Vec3(xs[i], ys[j], zs[k]));

  // Kuhn split: six tets per hex along the main diagonal; conforming
  // across neighboring cells.
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        for (const auto& perm : perms) {
          int v[4][3] = {{i, j, k}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
          for (int step = 0; step < 3; ++step) {
            for (int c = 0; c < 3; ++c) v[step + 1][c] = v[step][c];
            v[step + 1][perm[step]] += 1;
          }
          int n0 = id(v[0][0], v[0][1], v[0][2]);
          int n1 = id(v[1][0], v[1][1], v[1][2]);
          int n2 = id(v[2][0], v[2][1], v[2][2]);
          int n3 = id(v[3][0], v[3][1], v[3][2]);
          const Vec3 a = mesh.nodes[n0], b = mesh.nodes[n1],
                     c = mesh.nodes[n2], d = mesh.nodes[n3];
          if ((b - a).cross(c - a).dot(d - a) < 0.0) std::swap(n2, n3);
          mesh.conn.insert(mesh.conn.end(), {n0, n1, n2, n3});
        }
      }
  mesh.validate();
  mesh.extract_boundary();

  const double tol =
      1e-9 * (std::abs(xs.back() - xs.front()) +
              std::abs(ys.back() - ys.front()) +
              std::abs(zs.back() - zs.front()));
  const auto classify = [&](const Vec3& p, const char* lo_name,
                            const char* hi_name, int axis, double lo,
                            double hi, int node, auto& sets) {
    if (std::abs(p[axis] - lo) < tol) sets[lo_name].push_back(node);
    if (std::abs(p[axis] - hi) < tol) sets[hi_name].push_back(node);
  };
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    classify(mesh.nodes[n], "xmin", "xmax", 0, xs.front(), xs.back(), n,
             mesh.node_sets);
    classify(mesh.nodes[n], "ymin", "ymax", 1, ys.front(), ys.back(), n,
             mesh.node_sets);
    classify(mesh.nodes[n], "zmin", "zmax", 2, zs.front(), zs.back(), n,
             mesh.node_sets);
  }
  const auto facet_on = [&](int f, int axis, double v) {
    for (int k = 0; k < 3; ++k)
      if (std::abs(mesh.nodes[mesh.facets[f][k]][axis] - v) >= tol)
        return false;
    return true;
  };
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    if (facet_on(f, 0, xs.front())) mesh.facet_sets["xmin"].push_back(f);
    if (facet_on(f, 0, xs.back())) mesh.facet_sets["xmax"].push_back(f);
    if (facet_on(f, 1, ys.front())) mesh.facet_sets["ymin"].push_back(f);
    if (facet_on(f, 1, ys.back())) mesh.facet_sets["ymax"].push_back(f);
    if (facet_on(f, 2, zs.front())) mesh.facet_sets["zmin"].push_back(f);
    if (facet_on(f, 2, zs.back())) mesh.facet_sets["zmax"].push_back(f);
  }
  return mesh;
}

}  // namespace fcm::harness
