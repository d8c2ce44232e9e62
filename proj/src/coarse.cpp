#include "mdgs/coarse.hpp"

#include <algorithm>

#include <Eigen/Cholesky>

namespace mdgs {
namespace {

int local_of(const std::vector<int>& sorted, int vertex) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), vertex);
  if (it == sorted.end() || *it != vertex) return -1;
  return static_cast<int>(it - sorted.begin());
}

// Affine nodal function of local vertex p of K at grid vertex (i, j), from the
// integer offsets inside the H-cell so that nodal values come out exact.
double affine_nodal(const FineMesh& fine, const CoarseMesh& coarse, const CoarseTriangle& K, int p, int vertex) {
  const int stride = fine.n + 1;
  const int m = coarse.m;
  const int a = vertex % stride - K.cell_i * m;
  const int b = vertex / stride - K.cell_j * m;
  int num = 0;
  if (!K.upper) {
    // (v10, v11, v00)
    num = p == 0 ? a - b : p == 1 ? b : m - a;
  } else {
    // (v01, v00, v11)
    num = p == 0 ? b - a : p == 1 ? m - b : a;
  }
  return static_cast<double>(num) / m;
}

VertexFunction extend(const Eigen::MatrixXd& stiffness, const ElementVertices& ev, const VertexFunction& boundary) {
  const int nb = static_cast<int>(ev.boundary.size());
  const int ni = static_cast<int>(ev.interior.size());
  std::vector<int> bi(nb), ii(ni);
  for (int k = 0; k < nb; ++k) bi[k] = local_of(ev.all, ev.boundary[k]);
  for (int k = 0; k < ni; ++k) ii[k] = local_of(ev.all, ev.interior[k]);

  VertexFunction phi{ev.all, std::vector<double>(ev.all.size(), 0.0)};
  for (int k = 0; k < nb; ++k) phi.values[bi[k]] = boundary.at(ev.boundary[k]);
  if (ni == 0) return phi;

  Eigen::MatrixXd aii(ni, ni);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
  for (int r = 0; r < ni; ++r) {
    for (int c = 0; c < ni; ++c) aii(r, c) = stiffness(ii[r], ii[c]);
    for (int c = 0; c < nb; ++c) rhs[r] -= stiffness(ii[r], bi[c]) * phi.values[bi[c]];
  }
  Eigen::LLT<Eigen::MatrixXd> llt(aii);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::kInternal, "singular local harmonic extension");
  const Eigen::VectorXd x = llt.solve(rhs);
  for (int r = 0; r < ni; ++r) phi.values[ii[r]] = x[r];
  return phi;
}

double energy(const Eigen::MatrixXd& stiffness, const VertexFunction& phi) {
  const Eigen::Map<const Eigen::VectorXd> v(phi.values.data(), static_cast<Eigen::Index>(phi.values.size()));
  return v.dot(stiffness * v);
}

}  // namespace

const char* to_string(BasisType type) {
  switch (type) {
    case BasisType::kLinear: return "linear";
    case BasisType::kMsLinear: return "ms-linear";
    case BasisType::kMsOscillatory: return "ms-oscillatory";
  }
  return "unknown";
}

BasisType parse_basis_type(const std::string& name) {
  if (name == "linear") return BasisType::kLinear;
  if (name == "ms-linear") return BasisType::kMsLinear;
  if (name == "ms-oscillatory" || name == "ms-osc") return BasisType::kMsOscillatory;
  throw Error(ErrorKind::kInvalidConfiguration, "unknown basis type '" + name + "'");
}

double VertexFunction::at(int vertex) const {
  const int k = local_of(vertices, vertex);
  if (k < 0) throw Error(ErrorKind::kInternal, "vertex outside the function's support");
  return values[k];
}

std::vector<int> edge_vertex_path(const FineMesh& fine, const CoarseMesh& coarse, const CoarseEdge& E) {
  std::vector<int> path{coarse.fine_vertex(fine, E.vertices[0])};
  for (int fe : E.fine_edges) {
    const auto& v = fine.edges[fe].vertices;
    path.push_back(v[0] == path.back() ? v[1] : v[0]);
  }
  return path;
}

ElementVertices element_vertices(const FineMesh& fine, const CoarseMesh& coarse, int K) {
  const auto& tri = coarse.triangles.at(K);
  ElementVertices ev;
  for (int t : tri.fine_triangles)
    for (int v : fine.triangles[t].vertices) ev.all.push_back(v);
  for (int ce : tri.edges)
    for (int fe : coarse.edges[ce].fine_edges)
      for (int v : fine.edges[fe].vertices) ev.boundary.push_back(v);
  for (auto* list : {&ev.all, &ev.boundary}) {
    std::sort(list->begin(), list->end());
    list->erase(std::unique(list->begin(), list->end()), list->end());
  }
  std::set_difference(ev.all.begin(), ev.all.end(), ev.boundary.begin(), ev.boundary.end(),
                      std::back_inserter(ev.interior));
  return ev;
}

VertexFunction linear_boundary_data(const FineMesh& fine, const CoarseMesh& coarse, int K, int p) {
  const auto ev = element_vertices(fine, coarse, K);
  VertexFunction psi{ev.boundary, {}};
  for (int v : ev.boundary) psi.values.push_back(affine_nodal(fine, coarse, coarse.triangles[K], p, v));
  return psi;
}

VertexFunction oscillatory_boundary_data(const FineMesh& fine, const CoarseMesh& coarse,
                                         const CoefficientField& field, int K, int p, OscillatoryTrace trace) {
  const auto& tri = coarse.triangles.at(K);
  const auto ev = element_vertices(fine, coarse, K);
  VertexFunction psi{ev.boundary, std::vector<double>(ev.boundary.size(), 0.0)};
  const int cp = tri.vertices[p];
  for (int k = 0; k < 3; ++k) {
    if (k == p) continue;  // edge opposite x_p keeps zero data
    const auto& E = coarse.edges[tri.edges[k]];
    const auto path = edge_vertex_path(fine, coarse, E);
    const int segments = static_cast<int>(E.fine_edges.size());
    std::vector<double> cumulative(segments + 1, 0.0);
    for (int s = 0; s < segments; ++s) {
      const auto& e = fine.edges[E.fine_edges[s]];
      const int inside = (coarse.fine_to_coarse[e.plus] == K) ? e.plus : e.minus;
      double alpha = field.values[inside];
      if (trace == OscillatoryTrace::kHarmonicMean && !e.is_boundary())
        alpha = edge_weights(field.values[e.plus], field.values[e.minus]).W;
      cumulative[s + 1] = cumulative[s] + e.length / alpha;
    }
    const double total = cumulative[segments];
    const bool grows_forward = E.vertices[1] == cp;
    for (int s = 0; s <= segments; ++s) {
      const double value = grows_forward ? cumulative[s] / total : (total - cumulative[s]) / total;
      psi.values[local_of(psi.vertices, path[s])] = value;
    }
    // Pin the endpoints so nodal values are exact.
    psi.values[local_of(psi.vertices, path.front())] = grows_forward ? 0.0 : 1.0;
    psi.values[local_of(psi.vertices, path.back())] = grows_forward ? 1.0 : 0.0;
  }
  return psi;
}

Eigen::MatrixXd element_stiffness(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field,
                                  int K, const ElementVertices& ev) {
  const int nv = static_cast<int>(ev.all.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nv, nv);
  for (int t : coarse.triangles.at(K).fine_triangles) {
    const auto& tri = fine.triangles[t];
    const auto grads = basis_gradients(tri);
    const double scale = field.values[t] * tri.area;
    int loc[3];
    for (int k = 0; k < 3; ++k) loc[k] = local_of(ev.all, tri.vertices[k]);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) a(loc[r], loc[c]) += scale * dot(grads[r], grads[c]);
  }
  return a;
}

VertexFunction harmonic_extension(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field,
                                  int K, const VertexFunction& boundary) {
  const auto ev = element_vertices(fine, coarse, K);
  return extend(element_stiffness(fine, coarse, field, K, ev), ev, boundary);
}

double element_energy(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field, int K,
                      const VertexFunction& phi) {
  const auto ev = element_vertices(fine, coarse, K);
  if (phi.vertices != ev.all) throw Error(ErrorKind::kDimensionMismatch, "function not defined on all of K");
  return energy(element_stiffness(fine, coarse, field, K, ev), phi);
}

CoarseSpace build_coarse_space(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field,
                               BasisType type, OscillatoryTrace trace) {
  if (field.values.size() != fine.triangles.size())
    throw Error(ErrorKind::kDimensionMismatch, "field does not match the mesh");
  CoarseSpace space;
  space.type = type;
  space.trace = trace;
  const int nk = coarse.num_triangles();
  space.basis.resize(3 * static_cast<std::size_t>(nk));
  space.energies.resize(space.basis.size());

  // Each K writes only its own three slots, so the result does not depend on
  // the schedule. Exceptions cannot leave an OpenMP region; carry them out.
  std::vector<std::string> failures(nk);
#pragma omp parallel for schedule(dynamic)
  for (int K = 0; K < nk; ++K) {
    try {
      const auto ev = element_vertices(fine, coarse, K);
      const Eigen::MatrixXd stiff = element_stiffness(fine, coarse, field, K, ev);
      for (int p = 0; p < 3; ++p) {
        VertexFunction phi;
        if (type == BasisType::kLinear) {
          phi.vertices = ev.all;
          for (int v : ev.all) phi.values.push_back(affine_nodal(fine, coarse, coarse.triangles[K], p, v));
        } else {
          const auto psi = type == BasisType::kMsLinear ? linear_boundary_data(fine, coarse, K, p)
                                                         : oscillatory_boundary_data(fine, coarse, field, K, p, trace);
          phi = extend(stiff, ev, psi);
        }
        space.energies[3 * K + p] = energy(stiff, phi);
        space.basis[3 * K + p] = std::move(phi);
      }
    } catch (const std::exception& ex) {
      failures[K] = ex.what();
    }
  }
  for (const auto& f : failures)
    if (!f.empty()) throw Error(ErrorKind::kInternal, f);

  std::vector<Eigen::Triplet<double, int>> triplets;
  for (int K = 0; K < nk; ++K)
    for (int t : coarse.triangles[K].fine_triangles)
      for (int k = 0; k < 3; ++k)
        for (int p = 0; p < 3; ++p) {
          const double v = space.basis[3 * K + p].at(fine.triangles[t].vertices[k]);
          if (v != 0.0) triplets.emplace_back(dof_index(t, k), 3 * K + p, v);
        }
  space.prolongation.resize(fine.num_dofs(), space.dim());
  space.prolongation.setFromTriplets(triplets.begin(), triplets.end());
  space.prolongation.makeCompressed();
  space.restriction = space.prolongation.transpose();
  space.restriction.makeCompressed();
  return space;
}

SparseOperator coarse_operator(const SparseOperator& a, const CoarseSpace& space) {
  if (a.dim() != space.prolongation.rows())
    throw Error(ErrorKind::kDimensionMismatch, "coarse space does not match the operator");
  const SparseMatrix ap = a.matrix() * space.prolongation;
  SparseMatrix a0 = space.restriction * ap;
  const SparseMatrix a0t = a0.transpose();
  a0 = 0.5 * (a0 + a0t);
  a0.prune(0.0);
  a0.makeCompressed();
  return SparseOperator(std::move(a0));
}

}  // namespace mdgs
