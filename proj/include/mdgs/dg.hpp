#pragma once

#include <functional>
#include <iosfwd>

#include <Eigen/Core>

#include "mdgs/coeff.hpp"
#include "mdgs/kernels.hpp"
#include "mdgs/mesh.hpp"

namespace mdgs {

/// Harmonic-average edge weights. On boundary edges w_plus = 1, w_minus = 0
/// and W is the one-sided coefficient.
struct DgWeights {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double W = 0.0;
};

DgWeights edge_weights(double alpha_plus, double alpha_minus);
DgWeights boundary_weights(double alpha);
/// Weights of a fine edge for the given field.
DgWeights edge_weights(const Edge& e, const CoefficientField& field);

/// Symmetric sparse operator in CSR form.
class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(SparseMatrix a) : a_(std::move(a)) {}

  int dim() const { return static_cast<int>(a_.rows()); }
  long nnz() const { return static_cast<long>(a_.nonZeros()); }
  const SparseMatrix& matrix() const { return a_; }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y, Execution exec = Execution::kParallel) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  double quadratic(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  /// max |a_ij - a_ji|; zero for every operator this library assembles.
  double max_asymmetry() const;
  bool is_symmetric() const { return max_asymmetry() == 0.0; }

 private:
  SparseMatrix a_;
};

using ScalarFunction = std::function<double(Point)>;

struct DgSystem {
  SparseOperator matrix;
  Eigen::VectorXd rhs;
};

/// Matrix of the weighted interior-penalty form with penalty eta.
SparseOperator assemble_operator(const FineMesh& mesh, const CoefficientField& field, double eta);

/// Load vector for source f and Dirichlet data g. An empty g means g = 0.
Eigen::VectorXd assemble_rhs(const FineMesh& mesh, const CoefficientField& field, double eta,
                             const ScalarFunction& f, const ScalarFunction& g = {});

DgSystem assemble(const FineMesh& mesh, const CoefficientField& field, double eta,
                  const ScalarFunction& f, const ScalarFunction& g = {});

/// Squared broken energy norm: volume energy plus W/h weighted squared jumps
/// and boundary traces, without eta.
double energy_norm_squared(const FineMesh& mesh, const CoefficientField& field, const Eigen::VectorXd& u);

/// Part of a_h(u, v) carried by fine edges between different nonoverlapping
/// subdomains (pairs of coarse triangles sharing an H-cell).
double interface_form(const FineMesh& mesh, const CoarseMesh& coarse, const CoefficientField& field,
                      double eta, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// `MDGS-COO 1 <dim> <nnz>` followed by 0-based `i j value` lines.
void write_coo(std::ostream& os, const SparseMatrix& a);

/// P1 gradients of the three local basis functions of a triangle.
std::array<Point, 3> basis_gradients(const Triangle& t);

}  // namespace mdgs
