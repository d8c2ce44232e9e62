#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace mdgs {

/// Selects the serial reference or the OpenMP version of a kernel. Both
/// produce bit-identical results.
enum class Execution { kSerial, kParallel };

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// y = A x over the CSR rows of A.
void spmv(const SparseMatrix& a, const Eigen::VectorXd& x, Eigen::VectorXd& y, Execution exec);

/// Fixed-order dot product so reductions do not depend on the team size.
double dot_serial(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// y += s x, elementwise and therefore order-free.
void axpy(double s, const Eigen::VectorXd& x, Eigen::VectorXd& y, Execution exec);

}  // namespace mdgs
