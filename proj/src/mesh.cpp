#include "mdgs/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>

namespace mdgs {
namespace {

std::uint64_t edge_key(int a, int b) {
  auto lo = static_cast<std::uint64_t>(std::min(a, b));
  auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

// Corner ids of cell (i, j) in the local order of its lower and upper
// triangle on a grid with `stride` vertices per row.
std::array<int, 3> cell_triangle(int i, int j, bool upper, int stride) {
  const int v00 = j * stride + i;
  const int v10 = v00 + 1;
  const int v01 = v00 + stride;
  const int v11 = v01 + 1;
  if (upper) return {v01, v00, v11};
  return {v10, v11, v00};
}

Point outward_normal(Point a, Point b) {
  const Point d = b - a;
  const double len = std::hypot(d.x, d.y);
  return {d.y / len, -d.x / len};
}

}  // namespace

int FineMesh::num_interior_edges() const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(),
                                        [](const Edge& e) { return !e.is_boundary(); }));
}

int FineMesh::num_boundary_edges() const {
  return static_cast<int>(edges.size()) - num_interior_edges();
}

int FineMesh::local_index(int t, int vertex) const {
  const auto& v = triangles[t].vertices;
  for (int k = 0; k < 3; ++k)
    if (v[k] == vertex) return k;
  return -1;
}

FineMesh build_fine_mesh(int n) {
  if (n < 1) throw Error(ErrorKind::kInvalidConfiguration, "cells per side must be >= 1");
  FineMesh mesh;
  mesh.n = n;
  mesh.h = 1.0 / n;
  mesh.triangles.reserve(2 * static_cast<std::size_t>(n) * n);

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      for (bool upper : {false, true}) {
        Triangle t;
        t.cell_i = i;
        t.cell_j = j;
        t.upper = upper;
        t.vertices = cell_triangle(i, j, upper, n + 1);
        for (int k = 0; k < 3; ++k) t.coords[k] = mesh.vertex(t.vertices[k]);
        t.area = 0.5 * mesh.h * mesh.h;
        mesh.triangles.push_back(t);
      }
    }
  }

  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(3 * mesh.triangles.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int la = (k + 1) % 3;
      const int lb = (k + 2) % 3;
      const int a = tri.vertices[la];
      const int b = tri.vertices[lb];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), static_cast<int>(mesh.edges.size()));
      if (inserted) {
        Edge e;
        e.vertices = {a, b};
        e.coords = {tri.coords[la], tri.coords[lb]};
        const Point d = e.coords[1] - e.coords[0];
        e.length = std::hypot(d.x, d.y);
        e.plus = t;
        e.plus_local = {la, lb};
        e.normal = outward_normal(e.coords[0], e.coords[1]);
        mesh.edges.push_back(e);
      } else {
        Edge& e = mesh.edges[it->second];
        e.minus = t;
        e.minus_local = {mesh.local_index(t, e.vertices[0]), mesh.local_index(t, e.vertices[1])};
      }
      tri.edges[k] = it->second;
    }
  }
  return mesh;
}

int CoarseMesh::fine_vertex(const FineMesh& fine, int coarse_vertex) const {
  const int stride = cells_per_side + 1;
  return fine.vertex_id((coarse_vertex % stride) * m, (coarse_vertex / stride) * m);
}

CoarseMesh build_coarse_mesh(const FineMesh& fine, int m) {
  if (m < 1) throw Error(ErrorKind::kInvalidConfiguration, "H/h must be >= 1");
  if (fine.n % m != 0)
    throw Error(ErrorKind::kInvalidConfiguration,
                "n=" + std::to_string(fine.n) + " is not divisible by m=" + std::to_string(m));
  CoarseMesh coarse;
  coarse.m = m;
  coarse.cells_per_side = fine.n / m;
  coarse.H = m * fine.h;
  const int nc = coarse.cells_per_side;
  const int stride = nc + 1;
  auto coarse_point = [&](int id) { return Point{(id % stride) * coarse.H, (id / stride) * coarse.H}; };

  for (int J = 0; J < nc; ++J) {
    for (int I = 0; I < nc; ++I) {
      for (bool upper : {false, true}) {
        CoarseTriangle K;
        K.cell_i = I;
        K.cell_j = J;
        K.upper = upper;
        K.vertices = cell_triangle(I, J, upper, stride);
        for (int k = 0; k < 3; ++k) K.coords[k] = coarse_point(K.vertices[k]);
        coarse.triangles.push_back(std::move(K));
      }
    }
  }

  std::unordered_map<std::uint64_t, int> lookup;
  for (int c = 0; c < coarse.num_triangles(); ++c) {
    auto& K = coarse.triangles[c];
    for (int k = 0; k < 3; ++k) {
      const int a = K.vertices[(k + 1) % 3];
      const int b = K.vertices[(k + 2) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), static_cast<int>(coarse.edges.size()));
      if (inserted) {
        CoarseEdge E;
        E.vertices = {a, b};
        E.coords = {coarse_point(a), coarse_point(b)};
        E.plus = c;
        coarse.edges.push_back(std::move(E));
      } else {
        coarse.edges[it->second].minus = c;
      }
      K.edges[k] = it->second;
    }
  }

  coarse.fine_to_coarse.resize(fine.triangles.size());
  for (int t = 0; t < fine.num_triangles(); ++t) {
    const auto& tri = fine.triangles[t];
    const int a = tri.cell_i % m;
    const int b = tri.cell_j % m;
    const bool coarse_lower = tri.upper ? (b < a) : (b <= a);
    const int c = 2 * ((tri.cell_j / m) * nc + tri.cell_i / m) + (coarse_lower ? 0 : 1);
    coarse.fine_to_coarse[t] = c;
    coarse.triangles[c].fine_triangles.push_back(t);
  }

  coarse.fine_edge_to_coarse_edge.assign(fine.edges.size(), kBoundary);
  const int fstride = fine.n + 1;
  for (int e = 0; e < static_cast<int>(fine.edges.size()); ++e) {
    const auto& edge = fine.edges[e];
    const int i0 = edge.vertices[0] % fstride, j0 = edge.vertices[0] / fstride;
    const int i1 = edge.vertices[1] % fstride, j1 = edge.vertices[1] / fstride;
    const int ilo = std::min(i0, i1), jlo = std::min(j0, j1);
    int va = -1, vb = -1;
    if (j0 == j1) {
      if (j0 % m == 0) {
        va = (j0 / m) * stride + ilo / m;
        vb = va + 1;
      }
    } else if (i0 == i1) {
      if (i0 % m == 0) {
        va = (jlo / m) * stride + i0 / m;
        vb = va + stride;
      }
    } else if (ilo % m == jlo % m) {
      // Diagonal fine edge on the diagonal of its coarse cell.
      va = (jlo / m) * stride + ilo / m;
      vb = va + stride + 1;
    }
    if (va < 0) continue;
    const int ce = lookup.at(edge_key(va, vb));
    coarse.fine_edge_to_coarse_edge[e] = ce;
    coarse.edges[ce].fine_edges.push_back(e);
  }

  for (auto& E : coarse.edges) {
    const Point origin = E.coords[0];
    const Point dir = E.coords[1] - E.coords[0];
    std::sort(E.fine_edges.begin(), E.fine_edges.end(), [&](int a, int b) {
      const auto& ea = fine.edges[a];
      const auto& eb = fine.edges[b];
      const double pa = dot(0.5 * (ea.coords[0] + ea.coords[1]) - origin, dir);
      const double pb = dot(0.5 * (eb.coords[0] + eb.coords[1]) - origin, dir);
      return pa < pb;
    });
    if (static_cast<int>(E.fine_edges.size()) != m)
      throw Error(ErrorKind::kInternal, "coarse edge does not consist of m fine edges");
  }
  return coarse;
}

SubdomainPartition build_partition(const FineMesh& fine, const CoarseMesh& coarse,
                                   int overlap_layers) {
  if (overlap_layers < 0)
    throw Error(ErrorKind::kInvalidConfiguration, "overlap layers must be nonnegative");
  if (2 * overlap_layers > coarse.m)
    throw Error(ErrorKind::kInvalidConfiguration,
                "overlap width " + std::to_string(overlap_layers) + "h exceeds H/2");
  const int n = fine.n;
  const int m = coarse.m;
  SubdomainPartition part;
  part.per_side = coarse.cells_per_side;
  part.overlap_layers = overlap_layers;
  part.delta = overlap_layers * fine.h;
  part.owner.assign(fine.triangles.size(), -1);

  std::vector<char> member(fine.triangles.size(), 0);
  for (int J = 0; J < part.per_side; ++J) {
    for (int I = 0; I < part.per_side; ++I) {
      Subdomain sub;
      const int id = J * part.per_side + I;
      sub.cell_i = I;
      sub.cell_j = J;
      sub.coarse_triangles = {2 * id, 2 * id + 1};
      sub.delta = part.delta;
      auto collect = [&](int layers, std::vector<int>& out) {
        const int i0 = std::max(0, I * m - layers), i1 = std::min(n, (I + 1) * m + layers);
        const int j0 = std::max(0, J * m - layers), j1 = std::min(n, (J + 1) * m + layers);
        for (int j = j0; j < j1; ++j)
          for (int i = i0; i < i1; ++i) {
            out.push_back(fine.triangle_id(i, j, false));
            out.push_back(fine.triangle_id(i, j, true));
          }
      };
      collect(0, sub.triangles);
      collect(overlap_layers, sub.extended_triangles);
      for (int t : sub.triangles) part.owner[t] = id;

      for (int t : sub.extended_triangles) member[t] = 1;
      for (int e = 0; e < static_cast<int>(fine.edges.size()); ++e) {
        const auto& edge = fine.edges[e];
        if (edge.is_boundary()) {
          if (member[edge.plus]) sub.boundary_edges.push_back(e);
        } else if (member[edge.plus] != member[edge.minus]) {
          sub.interface_edges.push_back(e);
        }
      }
      for (int t : sub.extended_triangles) member[t] = 0;
      part.subdomains.push_back(std::move(sub));
    }
  }
  return part;
}

}  // namespace mdgs
