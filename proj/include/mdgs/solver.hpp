#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "mdgs/dg.hpp"
#include "mdgs/schwarz.hpp"

namespace mdgs {

struct SolveOptions {
  double tol = 1e-6;
  int max_iters = 2000;
  Execution exec = Execution::kParallel;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // relative residual norms, one per iterate
  double final_relative_residual = 0.0;  // recomputed as |b - Ax| / |b|
  double lambda_min = 1.0;               // extreme Ritz values of the CG Lanczos matrix
  double lambda_max = 1.0;
  double cond_estimate = 1.0;
  double seconds = 0.0;
};

/// Called after every iteration with the iteration count and current iterate.
using IterateCallback = std::function<void(int, const Eigen::VectorXd&)>;

/// Preconditioned CG from x = 0, stopping once |r| <= tol |b|. Running out of
/// iterations is reported, not thrown; a nonpositive curvature p^T A p throws
/// OperatorNotSpd.
SolveReport pcg(const SparseOperator& a, const Preconditioner& m, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                const SolveOptions& options = {}, const IterateCallback& on_iterate = {});

/// Condition estimate from the Lanczos coefficients of a CG run.
struct Spectrum {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
};

Spectrum lanczos_spectrum(const std::vector<double>& cg_alpha, const std::vector<double>& cg_beta);

/// Exact extreme eigenvalues of M^{-1} A by dense symmetric reduction.
/// Refuses dimensions above `max_dim`.
Spectrum dense_condition_oracle(const SparseOperator& a, const Preconditioner& m, int max_dim = 5000);

}  // namespace mdgs
