#include "mdgs/solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace mdgs {

Spectrum lanczos_spectrum(const std::vector<double>& cg_alpha, const std::vector<double>& cg_beta) {
  const int k = static_cast<int>(cg_alpha.size());
  if (k == 0) return {1.0, 1.0, 1.0};
  Eigen::VectorXd diag(k);
  Eigen::VectorXd off(std::max(k - 1, 0));
  for (int j = 0; j < k; ++j) {
    diag[j] = 1.0 / cg_alpha[j] + (j > 0 ? cg_beta[j - 1] / cg_alpha[j - 1] : 0.0);
    if (j + 1 < k) off[j] = std::sqrt(cg_beta[j]) / cg_alpha[j];
  }
  if (k == 1) return {diag[0], diag[0], 1.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()[0];
  const double hi = eig.eigenvalues()[k - 1];
  return {lo, hi, hi / lo};
}

SolveReport pcg(const SparseOperator& a, const Preconditioner& m, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                const SolveOptions& options, const IterateCallback& on_iterate) {
  if (b.size() != a.dim() || m.dim() != a.dim()) throw Error(ErrorKind::kDimensionMismatch, "pcg operands");
  if (!(options.tol > 0.0 && options.tol < 1.0)) throw Error(ErrorKind::kInvalidValue, "tol must lie in (0,1)");
  const auto start = std::chrono::steady_clock::now();
  const Execution exec = options.exec;
  SolveReport report;
  x = Eigen::VectorXd::Zero(a.dim());

  const double b_norm = std::sqrt(dot_serial(b, b));
  if (b_norm == 0.0) {
    report.converged = true;
    report.residual_history.push_back(0.0);
    return report;
  }

  Eigen::VectorXd r = b, z, p, ap;
  m.apply(r, z);
  p = z;
  double rz = dot_serial(r, z);
  double r_norm = b_norm;
  report.residual_history.push_back(1.0);
  std::vector<double> alphas, betas;

  while (report.iterations < options.max_iters) {
    a.apply(p, ap, exec);
    const double pap = dot_serial(p, ap);
    if (!(pap > 0.0))
      throw Error(ErrorKind::kOperatorNotSpd, "nonpositive curvature at iteration " + std::to_string(report.iterations));
    const double alpha = rz / pap;
    axpy(alpha, p, x, exec);
    axpy(-alpha, ap, r, exec);
    ++report.iterations;
    alphas.push_back(alpha);
    r_norm = std::sqrt(dot_serial(r, r));
    report.residual_history.push_back(r_norm / b_norm);
    if (on_iterate) on_iterate(report.iterations, x);
    if (r_norm <= options.tol * b_norm) {
      report.converged = true;
      break;
    }
    m.apply(r, z);
    const double rz_next = dot_serial(r, z);
    const double beta = rz_next / rz;
    betas.push_back(beta);
    rz = rz_next;
    // p = z + beta p, elementwise.
    if (exec == Execution::kSerial) {
      for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    } else {
#pragma omp parallel for schedule(static)
      for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    }
  }

  const Spectrum s = lanczos_spectrum(alphas, betas);
  report.lambda_min = s.lambda_min;
  report.lambda_max = s.lambda_max;
  report.cond_estimate = s.kappa;
  Eigen::VectorXd ax;
  a.apply(x, ax, exec);
  const Eigen::VectorXd res = b - ax;
  report.final_relative_residual = std::sqrt(dot_serial(res, res)) / b_norm;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Spectrum dense_condition_oracle(const SparseOperator& a, const Preconditioner& m, int max_dim) {
  const int n = a.dim();
  if (n > max_dim)
    throw Error(ErrorKind::kInvalidConfiguration,
                "dense oracle limited to dimension " + std::to_string(max_dim) + ", got " + std::to_string(n));
  Eigen::MatrixXd minv(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n), col;
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    m.apply(e, col);
    minv.col(j) = col;
    e[j] = 0.0;
  }
  minv = 0.5 * (minv + minv.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(minv);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::kOperatorNotSpd, "preconditioner is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd dense_a = Eigen::MatrixXd(a.matrix());
  Eigen::MatrixXd s = l.transpose() * dense_a * l;
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()[0];
  const double hi = eig.eigenvalues()[n - 1];
  if (!(lo > 0.0)) throw Error(ErrorKind::kOperatorNotSpd, "preconditioned operator has a nonpositive eigenvalue");
  return {lo, hi, hi / lo};
}

}  // namespace mdgs
