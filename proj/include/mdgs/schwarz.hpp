#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include "mdgs/coarse.hpp"
#include "mdgs/dg.hpp"
#include "mdgs/kernels.hpp"
#include "mdgs/mesh.hpp"

namespace mdgs {

/// Symmetric positive definite approximation of A^{-1}.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual int dim() const = 0;
  virtual void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
 public:
  explicit IdentityPreconditioner(int dim) : dim_(dim) {}
  int dim() const override { return dim_; }
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const override { z = r; }

 private:
  int dim_;
};

enum class SchwarzMethod { kNonoverlapping, kOverlapping };

const char* to_string(SchwarzMethod method);
SchwarzMethod parse_method(const std::string& name);

/// Two-level additive Schwarz: M^{-1} = P A0^{-1} P^T + sum_i E_i A_i^{-1} E_i^T
/// with exact sparse Cholesky solves. A_i is the principal submatrix of A on
/// the dofs of the triangles of the subdomain (extended for overlapping).
class SchwarzPreconditioner final : public Preconditioner {
 public:
  /// `coarse` may be null for a one-level method.
  SchwarzPreconditioner(const SparseOperator& a, const CoarseSpace* coarse, const SubdomainPartition& partition,
                        SchwarzMethod method, Execution exec = Execution::kParallel);
  ~SchwarzPreconditioner() override;

  int dim() const override { return dim_; }
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const override { apply(r, z, exec_); }
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z, Execution exec) const;

  SchwarzMethod method() const { return method_; }
  int num_subdomains() const { return static_cast<int>(locals_.size()); }
  const std::vector<int>& local_dofs(int i) const;
  int coarse_dim() const;
  const SparseOperator* coarse_matrix() const { return coarse_ ? &coarse_->a0 : nullptr; }

 private:
  using Factor = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>;
  struct Local {
    std::vector<int> dofs;
    Factor factor;
  };
  struct Coarse {
    SparseOperator a0;
    Factor factor;
    const SparseMatrix* prolongation = nullptr;
    const SparseMatrix* restriction = nullptr;
  };

  int dim_ = 0;
  SchwarzMethod method_;
  Execution exec_;
  std::vector<std::unique_ptr<Local>> locals_;
  std::unique_ptr<Coarse> coarse_;
  // For each fine dof, the (subdomain, local position) pairs touching it in
  // ascending subdomain order, as CSR.
  std::vector<int> contrib_start_;
  std::vector<int> contrib_sub_;
  std::vector<int> contrib_pos_;
};

}  // namespace mdgs
