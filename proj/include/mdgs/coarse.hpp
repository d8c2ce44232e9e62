#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "mdgs/coeff.hpp"
#include "mdgs/dg.hpp"
#include "mdgs/mesh.hpp"

namespace mdgs {

enum class BasisType { kLinear, kMsLinear, kMsOscillatory };

/// Which coefficient the oscillatory boundary data integrates along a coarse
/// edge where the two sides differ.
enum class OscillatoryTrace { kOwnSide, kHarmonicMean };

const char* to_string(BasisType type);
BasisType parse_basis_type(const std::string& name);

/// Values at a set of fine grid vertices, ids ascending.
struct VertexFunction {
  std::vector<int> vertices;
  std::vector<double> values;

  /// Value at a grid vertex of the set; throws if absent.
  double at(int vertex) const;
};

/// Fine vertices of the closed coarse triangle, ascending, split into those
/// on its boundary and the rest.
struct ElementVertices {
  std::vector<int> all;
  std::vector<int> boundary;
  std::vector<int> interior;
};

ElementVertices element_vertices(const FineMesh& fine, const CoarseMesh& coarse, int K);

/// The m + 1 fine vertices along a coarse edge, starting at its vertices[0].
std::vector<int> edge_vertex_path(const FineMesh& fine, const CoarseMesh& coarse, const CoarseEdge& E);

/// Affine nodal function of vertex p of K restricted to the fine vertices on
/// the boundary of K.
VertexFunction linear_boundary_data(const FineMesh& fine, const CoarseMesh& coarse, int K, int p);

/// Boundary data that grows from 0 to 1 along each edge through x_p in
/// proportion to the integral of 1/alpha, and vanishes on the opposite edge.
VertexFunction oscillatory_boundary_data(const FineMesh& fine, const CoarseMesh& coarse,
                                         const CoefficientField& field, int K, int p,
                                         OscillatoryTrace trace = OscillatoryTrace::kOwnSide);

/// Conforming P1 alpha-weighted stiffness matrix of K over `vertices.all`.
Eigen::MatrixXd element_stiffness(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field,
                                  int K, const ElementVertices& vertices);

/// Discrete alpha-harmonic extension of the boundary data into K.
VertexFunction harmonic_extension(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field,
                                  int K, const VertexFunction& boundary);

/// Weighted energy |phi|^2_{1,alpha,K} of a conforming function on K.
double element_energy(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field, int K,
                      const VertexFunction& phi);

/// Coarse space with three basis functions per coarse triangle; coarse dof
/// 3K + p belongs to local vertex p of K.
struct CoarseSpace {
  BasisType type = BasisType::kMsLinear;
  OscillatoryTrace trace = OscillatoryTrace::kOwnSide;
  std::vector<VertexFunction> basis;  // per coarse dof, on the vertices of K
  std::vector<double> energies;       // |phi_{p,K}|^2_{1,alpha,K} per coarse dof
  SparseMatrix prolongation;          // fine dofs x coarse dofs
  SparseMatrix restriction;           // its transpose

  int dim() const { return static_cast<int>(basis.size()); }
};

CoarseSpace build_coarse_space(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field,
                               BasisType type, OscillatoryTrace trace = OscillatoryTrace::kOwnSide);

/// Galerkin operator P^T A P.
SparseOperator coarse_operator(const SparseOperator& a, const CoarseSpace& space);

}  // namespace mdgs
