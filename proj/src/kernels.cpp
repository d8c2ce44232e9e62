#include "mdgs/kernels.hpp"

namespace mdgs {
namespace {

inline double row_product(const SparseMatrix& a, const Eigen::VectorXd& x, int row) {
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  const double* val = a.valuePtr();
  double s = 0.0;
  for (int k = outer[row]; k < outer[row + 1]; ++k) s += val[k] * x[inner[k]];
  return s;
}

}  // namespace

void spmv(const SparseMatrix& a, const Eigen::VectorXd& x, Eigen::VectorXd& y, Execution exec) {
  const int rows = static_cast<int>(a.rows());
  y.resize(rows);
  if (exec == Execution::kSerial) {
    for (int i = 0; i < rows; ++i) y[i] = row_product(a, x, i);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) y[i] = row_product(a, x, i);
}

double dot_serial(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double s, const Eigen::VectorXd& x, Eigen::VectorXd& y, Execution exec) {
  const Eigen::Index n = x.size();
  if (exec == Execution::kSerial) {
    for (Eigen::Index i = 0; i < n; ++i) y[i] += s * x[i];
    return;
  }
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) y[i] += s * x[i];
}

}  // namespace mdgs
