#pragma once

#include <array>
#include <vector>

#include "mdgs/common.hpp"

namespace mdgs {

inline constexpr int kBoundary = -1;

/// Fine triangle. Every grid cell is split along its lower-left to
/// upper-right diagonal. Local vertex 0 is the right-angle vertex, 1 and 2
/// follow counterclockwise. Local edge k is opposite local vertex k.
struct Triangle {
  int cell_i = 0;
  int cell_j = 0;
  bool upper = false;
  std::array<int, 3> vertices{};  // grid vertex ids
  std::array<Point, 3> coords{};
  std::array<int, 3> edges{};
  double area = 0.0;
};

/// Fine edge. The normal points out of the plus triangle; for interior edges
/// plus is the lower triangle id of the pair.
struct Edge {
  std::array<int, 2> vertices{};
  std::array<Point, 2> coords{};
  double length = 0.0;
  int plus = kBoundary;
  int minus = kBoundary;
  std::array<int, 2> plus_local{};   // local index in plus of vertices[0..1]
  std::array<int, 2> minus_local{};  // same for minus, unused on the boundary
  Point normal;

  bool is_boundary() const { return minus == kBoundary; }
};

/// Structured triangulation of the unit square with n cells per side.
/// Triangles are numbered cell-major (row-major cells, lower before upper);
/// the DG degrees of freedom of triangle t are 3t, 3t+1, 3t+2.
struct FineMesh {
  int n = 0;
  double h = 0.0;
  std::vector<Triangle> triangles;
  std::vector<Edge> edges;

  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_dofs() const { return 3 * num_triangles(); }
  int num_vertices() const { return (n + 1) * (n + 1); }
  int vertex_id(int i, int j) const { return j * (n + 1) + i; }
  Point vertex(int id) const { return {(id % (n + 1)) * h, (id / (n + 1)) * h}; }
  int triangle_id(int cell_i, int cell_j, bool upper) const {
    return 2 * (cell_j * n + cell_i) + (upper ? 1 : 0);
  }
  int num_interior_edges() const;
  int num_boundary_edges() const;
  /// Local index of a grid vertex within triangle t, or -1.
  int local_index(int t, int vertex) const;
};

inline int dof_index(int triangle, int local) { return 3 * triangle + local; }

FineMesh build_fine_mesh(int n);

struct CoarseTriangle {
  int cell_i = 0;
  int cell_j = 0;
  bool upper = false;
  std::array<int, 3> vertices{};  // coarse vertex ids
  std::array<Point, 3> coords{};
  std::array<int, 3> edges{};     // coarse edge opposite local vertex k
  std::vector<int> fine_triangles;  // ascending
};

struct CoarseEdge {
  std::array<int, 2> vertices{};  // coarse vertex ids
  std::array<Point, 2> coords{};
  int plus = kBoundary;
  int minus = kBoundary;
  std::vector<int> fine_edges;  // ordered from vertices[0] to vertices[1]

  bool is_boundary() const { return minus == kBoundary; }
};

/// Coarse triangulation with H = m h, built by applying the fine splitting
/// rule to the grid of H-cells so that every coarse edge is a union of fine
/// edges.
struct CoarseMesh {
  int m = 0;
  int cells_per_side = 0;
  double H = 0.0;
  std::vector<CoarseTriangle> triangles;
  std::vector<CoarseEdge> edges;
  std::vector<int> fine_to_coarse;            // per fine triangle
  std::vector<int> fine_edge_to_coarse_edge;  // per fine edge, kBoundary if none

  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_vertices() const { return (cells_per_side + 1) * (cells_per_side + 1); }
  /// Fine grid vertex id of a coarse vertex.
  int fine_vertex(const FineMesh& fine, int coarse_vertex) const;
};

CoarseMesh build_coarse_mesh(const FineMesh& fine, int m);

struct Subdomain {
  int cell_i = 0;
  int cell_j = 0;
  std::array<int, 2> coarse_triangles{};
  std::vector<int> triangles;           // Omega_i, ascending
  std::vector<int> extended_triangles;  // Omega_i', ascending
  std::vector<int> interface_edges;     // fine edges on dOmega_i' away from dOmega
  std::vector<int> boundary_edges;      // fine edges on dOmega_i' within dOmega
  double delta = 0.0;
};

/// Square subdomains of side H (two coarse triangles each) and their
/// extensions by whole fine-cell layers, clipped at the domain boundary.
struct SubdomainPartition {
  int per_side = 0;
  int overlap_layers = 0;
  double delta = 0.0;
  std::vector<Subdomain> subdomains;
  std::vector<int> owner;  // fine triangle -> nonoverlapping subdomain

  int size() const { return static_cast<int>(subdomains.size()); }
};

SubdomainPartition build_partition(const FineMesh& fine, const CoarseMesh& coarse,
                                   int overlap_layers);

}  // namespace mdgs
