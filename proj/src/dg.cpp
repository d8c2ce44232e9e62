#include "mdgs/dg.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

namespace mdgs {
namespace {

// Degree-5 seven-point rule on the reference triangle, barycentric points.
struct QuadPoint {
  double l0, l1, l2, w;
};
constexpr double kA1 = 0.059715871789770, kB1 = 0.470142064105115, kW1 = 0.132394152788506;
constexpr double kA2 = 0.797426985353087, kB2 = 0.101286507323456, kW2 = 0.125939180544827;
constexpr QuadPoint kTriangleRule[7] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {kA1, kB1, kB1, kW1}, {kB1, kA1, kB1, kW1}, {kB1, kB1, kA1, kW1},
    {kA2, kB2, kB2, kW2}, {kB2, kA2, kB2, kW2}, {kB2, kB2, kA2, kW2},
};

// Local contribution of one fine edge. Rows 0..2 belong to the plus triangle,
// rows 3..5 to the minus triangle (absent on the boundary).
struct EdgeBlock {
  int size = 0;
  std::array<int, 6> dofs{};
  double a[6][6] = {};
};

EdgeBlock edge_block(const FineMesh& mesh, const CoefficientField& field, double eta, const Edge& e) {
  EdgeBlock blk;
  const bool boundary = e.is_boundary();
  blk.size = boundary ? 3 : 6;
  const DgWeights w = edge_weights(e, field);
  const double len = e.length;
  const double penalty = eta * w.W / len;

  // Edge traces of local basis functions: value at edge endpoint 0 and 1.
  double trace[6][2] = {};
  double flux[6] = {};
  auto fill_side = [&](int t, const std::array<int, 2>& local, int offset, double sign, double weight) {
    const auto grads = basis_gradients(mesh.triangles[t]);
    const double alpha = field.values[t];
    for (int k = 0; k < 3; ++k) {
      blk.dofs[offset + k] = dof_index(t, k);
      flux[offset + k] = weight * alpha * dot(grads[k], e.normal);
      trace[offset + k][0] = (local[0] == k) ? sign : 0.0;
      trace[offset + k][1] = (local[1] == k) ? sign : 0.0;
    }
  };
  fill_side(e.plus, e.plus_local, 0, 1.0, w.w_plus);
  if (!boundary) fill_side(e.minus, e.minus_local, 3, -1.0, w.w_minus);

  double mean[6];
  for (int r = 0; r < blk.size; ++r) mean[r] = 0.5 * len * (trace[r][0] + trace[r][1]);
  const double m_diag = len / 3.0, m_off = len / 6.0;
  for (int r = 0; r < blk.size; ++r) {
    for (int c = r; c < blk.size; ++c) {
      const double mass = m_diag * (trace[r][0] * trace[c][0] + trace[r][1] * trace[c][1]) +
                          m_off * (trace[r][0] * trace[c][1] + trace[r][1] * trace[c][0]);
      const double v = -(flux[c] * mean[r] + flux[r] * mean[c]) + penalty * mass;
      blk.a[r][c] = v;
      blk.a[c][r] = v;
    }
  }
  return blk;
}

void check_field(const FineMesh& mesh, const CoefficientField& field) {
  if (field.values.size() != mesh.triangles.size())
    throw Error(ErrorKind::kDimensionMismatch, "field does not match the mesh");
}

void check_vector(const FineMesh& mesh, const Eigen::VectorXd& u) {
  if (u.size() != mesh.num_dofs()) throw Error(ErrorKind::kDimensionMismatch, "vector length != dof count");
}

}  // namespace

DgWeights edge_weights(double alpha_plus, double alpha_minus) {
  if (!(alpha_plus > 0.0) || !(alpha_minus > 0.0))
    throw Error(ErrorKind::kInvalidValue, "edge coefficients must be positive");
  const double sum = alpha_plus + alpha_minus;
  return {alpha_minus / sum, alpha_plus / sum, 2.0 * alpha_plus * alpha_minus / sum};
}

DgWeights boundary_weights(double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::kInvalidValue, "edge coefficient must be positive");
  return {1.0, 0.0, alpha};
}

DgWeights edge_weights(const Edge& e, const CoefficientField& field) {
  if (e.is_boundary()) return boundary_weights(field.values[e.plus]);
  return edge_weights(field.values[e.plus], field.values[e.minus]);
}

std::array<Point, 3> basis_gradients(const Triangle& t) {
  const Point p0 = t.coords[0], p1 = t.coords[1], p2 = t.coords[2];
  const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  return {Point{(p1.y - p2.y) / det, (p2.x - p1.x) / det}, Point{(p2.y - p0.y) / det, (p0.x - p2.x) / det},
          Point{(p0.y - p1.y) / det, (p1.x - p0.x) / det}};
}

void SparseOperator::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y, Execution exec) const {
  if (x.size() != a_.cols()) throw Error(ErrorKind::kDimensionMismatch, "operator apply");
  spmv(a_, x, y, exec);
}

Eigen::VectorXd SparseOperator::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  apply(x, y);
  return y;
}

double SparseOperator::quadratic(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  Eigen::VectorXd av;
  apply(v, av, Execution::kSerial);
  return dot_serial(u, av);
}

double SparseOperator::max_asymmetry() const {
  const SparseMatrix at = a_.transpose();
  double worst = 0.0;
  for (int i = 0; i < a_.outerSize(); ++i) {
    SparseMatrix::InnerIterator it(a_, i), jt(at, i);
    while (it || jt) {
      if (it && jt && it.index() == jt.index()) {
        worst = std::max(worst, std::abs(it.value() - jt.value()));
        ++it;
        ++jt;
      } else if (it && (!jt || it.index() < jt.index())) {
        worst = std::max(worst, std::abs(it.value()));
        ++it;
      } else {
        worst = std::max(worst, std::abs(jt.value()));
        ++jt;
      }
    }
  }
  return worst;
}

SparseOperator assemble_operator(const FineMesh& mesh, const CoefficientField& field, double eta) {
  check_field(mesh, field);
  if (!(eta > 0.0)) throw Error(ErrorKind::kInvalidValue, "penalty must be positive");
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(9 * mesh.triangles.size() + 36 * mesh.edges.size());

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto grads = basis_gradients(tri);
    const double scale = field.values[t] * tri.area;
    for (int r = 0; r < 3; ++r)
      for (int c = r; c < 3; ++c) {
        const double v = scale * dot(grads[r], grads[c]);
        triplets.emplace_back(dof_index(t, r), dof_index(t, c), v);
        if (c != r) triplets.emplace_back(dof_index(t, c), dof_index(t, r), v);
      }
  }
  for (const auto& e : mesh.edges) {
    const EdgeBlock blk = edge_block(mesh, field, eta, e);
    for (int r = 0; r < blk.size; ++r)
      for (int c = r; c < blk.size; ++c) {
        triplets.emplace_back(blk.dofs[r], blk.dofs[c], blk.a[r][c]);
        if (c != r) triplets.emplace_back(blk.dofs[c], blk.dofs[r], blk.a[c][r]);
      }
  }
  SparseMatrix a(mesh.num_dofs(), mesh.num_dofs());
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return SparseOperator(std::move(a));
}

Eigen::VectorXd assemble_rhs(const FineMesh& mesh, const CoefficientField& field, double eta,
                             const ScalarFunction& f, const ScalarFunction& g) {
  check_field(mesh, field);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.num_dofs());
  if (f) {
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto& tri = mesh.triangles[t];
      for (const auto& q : kTriangleRule) {
        const Point x = q.l0 * tri.coords[0] + q.l1 * tri.coords[1] + q.l2 * tri.coords[2];
        const double fx = f(x) * q.w * tri.area;
        b[dof_index(t, 0)] += fx * q.l0;
        b[dof_index(t, 1)] += fx * q.l1;
        b[dof_index(t, 2)] += fx * q.l2;
      }
    }
  }
  if (g) {
    for (const auto& e : mesh.edges) {
      if (!e.is_boundary()) continue;
      const double alpha = field.values[e.plus];
      const double penalty = eta * alpha / e.length;
      const double ga = g(e.coords[0]), gb = g(e.coords[1]);
      const double gm = g(0.5 * (e.coords[0] + e.coords[1]));
      const double g_mean = e.length / 6.0 * (ga + 4.0 * gm + gb);
      const auto grads = basis_gradients(mesh.triangles[e.plus]);
      for (int k = 0; k < 3; ++k) {
        // Simpson on g * phi_k, phi_k linear along the edge.
        const double pa = e.plus_local[0] == k ? 1.0 : 0.0;
        const double pb = e.plus_local[1] == k ? 1.0 : 0.0;
        const double g_phi = e.length / 6.0 * (ga * pa + 2.0 * gm * (pa + pb) + gb * pb);
        b[dof_index(e.plus, k)] += -alpha * dot(grads[k], e.normal) * g_mean + penalty * g_phi;
      }
    }
  }
  return b;
}

DgSystem assemble(const FineMesh& mesh, const CoefficientField& field, double eta, const ScalarFunction& f,
                  const ScalarFunction& g) {
  return {assemble_operator(mesh, field, eta), assemble_rhs(mesh, field, eta, f, g)};
}

double energy_norm_squared(const FineMesh& mesh, const CoefficientField& field, const Eigen::VectorXd& u) {
  check_field(mesh, field);
  check_vector(mesh, u);
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto grads = basis_gradients(tri);
    const Point g = u[dof_index(t, 0)] * grads[0] + u[dof_index(t, 1)] * grads[1] + u[dof_index(t, 2)] * grads[2];
    sum += field.values[t] * tri.area * dot(g, g);
  }
  for (const auto& e : mesh.edges) {
    const double W = edge_weights(e, field).W;
    double da = u[dof_index(e.plus, e.plus_local[0])];
    double db = u[dof_index(e.plus, e.plus_local[1])];
    if (!e.is_boundary()) {
      da -= u[dof_index(e.minus, e.minus_local[0])];
      db -= u[dof_index(e.minus, e.minus_local[1])];
    }
    sum += W / e.length * e.length / 3.0 * (da * da + da * db + db * db);
  }
  return sum;
}

double interface_form(const FineMesh& mesh, const CoarseMesh& coarse, const CoefficientField& field,
                      double eta, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  check_field(mesh, field);
  check_vector(mesh, u);
  check_vector(mesh, v);
  double sum = 0.0;
  for (const auto& e : mesh.edges) {
    if (e.is_boundary()) continue;
    if (coarse.fine_to_coarse[e.plus] / 2 == coarse.fine_to_coarse[e.minus] / 2) continue;
    const EdgeBlock blk = edge_block(mesh, field, eta, e);
    for (int r = 0; r < 3; ++r)
      for (int c = 3; c < 6; ++c)
        sum += blk.a[r][c] * (u[blk.dofs[r]] * v[blk.dofs[c]] + u[blk.dofs[c]] * v[blk.dofs[r]]);
  }
  return sum;
}

void write_coo(std::ostream& os, const SparseMatrix& a) {
  os << "MDGS-COO 1 " << a.rows() << ' ' << a.nonZeros() << '\n';
  char buf[96];
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, static_cast<int>(it.index()), it.value());
      os << buf;
    }
}

}  // namespace mdgs
