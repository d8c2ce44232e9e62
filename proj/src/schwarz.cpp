#include "mdgs/schwarz.hpp"

#include <string>

namespace mdgs {

const char* to_string(SchwarzMethod method) {
  return method == SchwarzMethod::kNonoverlapping ? "nonoverlapping" : "overlapping";
}

SchwarzMethod parse_method(const std::string& name) {
  if (name == "nonoverlapping") return SchwarzMethod::kNonoverlapping;
  if (name == "overlapping") return SchwarzMethod::kOverlapping;
  throw Error(ErrorKind::kInvalidConfiguration, "unknown method '" + name + "'");
}

SchwarzPreconditioner::~SchwarzPreconditioner() = default;

SchwarzPreconditioner::SchwarzPreconditioner(const SparseOperator& a, const CoarseSpace* coarse,
                                             const SubdomainPartition& partition, SchwarzMethod method,
                                             Execution exec)
    : dim_(a.dim()), method_(method), exec_(exec) {
  if (method == SchwarzMethod::kNonoverlapping && partition.overlap_layers != 0)
    throw Error(ErrorKind::kInvalidConfiguration, "nonoverlapping method needs overlap 0");
  if (method == SchwarzMethod::kOverlapping && partition.overlap_layers < 1)
    throw Error(ErrorKind::kInvalidConfiguration, "overlapping method needs overlap >= 1");
  if (static_cast<long>(partition.owner.size()) * 3 != dim_)
    throw Error(ErrorKind::kDimensionMismatch, "partition does not match the operator");

  const SparseMatrix& am = a.matrix();
  std::vector<int> position(dim_, -1);
  for (const auto& sub : partition.subdomains) {
    auto local = std::make_unique<Local>();
    const auto& tris = method == SchwarzMethod::kOverlapping ? sub.extended_triangles : sub.triangles;
    for (int t : tris)
      for (int k = 0; k < 3; ++k) local->dofs.push_back(dof_index(t, k));
    const int nl = static_cast<int>(local->dofs.size());
    for (int q = 0; q < nl; ++q) position[local->dofs[q]] = q;

    std::vector<Eigen::Triplet<double, int>> triplets;
    for (int q = 0; q < nl; ++q)
      for (SparseMatrix::InnerIterator it(am, local->dofs[q]); it; ++it) {
        const int c = position[it.index()];
        if (c >= 0) triplets.emplace_back(q, c, it.value());
      }
    Eigen::SparseMatrix<double> ai(nl, nl);
    ai.setFromTriplets(triplets.begin(), triplets.end());
    local->factor.compute(ai);
    if (local->factor.info() != Eigen::Success)
      throw Error(ErrorKind::kPenaltyTooSmall,
                  "local matrix of subdomain " + std::to_string(locals_.size()) + " is not positive definite");
    for (int d : local->dofs) position[d] = -1;
    locals_.push_back(std::move(local));
  }

  contrib_start_.assign(dim_ + 1, 0);
  for (const auto& l : locals_)
    for (int d : l->dofs) ++contrib_start_[d + 1];
  for (int d = 0; d < dim_; ++d) contrib_start_[d + 1] += contrib_start_[d];
  contrib_sub_.resize(contrib_start_[dim_]);
  contrib_pos_.resize(contrib_start_[dim_]);
  std::vector<int> fill(contrib_start_.begin(), contrib_start_.end() - 1);
  for (int i = 0; i < num_subdomains(); ++i) {
    const auto& dofs = locals_[i]->dofs;
    for (int q = 0; q < static_cast<int>(dofs.size()); ++q) {
      const int slot = fill[dofs[q]]++;
      contrib_sub_[slot] = i;
      contrib_pos_[slot] = q;
    }
  }

  if (coarse) {
    coarse_ = std::make_unique<Coarse>();
    coarse_->a0 = coarse_operator(a, *coarse);
    coarse_->prolongation = &coarse->prolongation;
    coarse_->restriction = &coarse->restriction;
    coarse_->factor.compute(Eigen::SparseMatrix<double>(coarse_->a0.matrix()));
    if (coarse_->factor.info() != Eigen::Success)
      throw Error(ErrorKind::kPenaltyTooSmall, "coarse matrix is not positive definite");
  }
}

const std::vector<int>& SchwarzPreconditioner::local_dofs(int i) const { return locals_.at(i)->dofs; }

int SchwarzPreconditioner::coarse_dim() const { return coarse_ ? coarse_->a0.dim() : 0; }

void SchwarzPreconditioner::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z, Execution exec) const {
  if (r.size() != dim_) throw Error(ErrorKind::kDimensionMismatch, "preconditioner apply");
  Eigen::VectorXd base = Eigen::VectorXd::Zero(dim_);
  if (coarse_) {
    Eigen::VectorXd rc;
    spmv(*coarse_->restriction, r, rc, exec);
    const Eigen::VectorXd yc = coarse_->factor.solve(rc);
    spmv(*coarse_->prolongation, yc, base, exec);
  }

  const int ns = num_subdomains();
  std::vector<Eigen::VectorXd> solutions(ns);
  auto local_solve = [&](int i) {
    const auto& l = *locals_[i];
    Eigen::VectorXd ri(l.dofs.size());
    for (std::size_t q = 0; q < l.dofs.size(); ++q) ri[q] = r[l.dofs[q]];
    solutions[i] = l.factor.solve(ri);
  };
  auto combine = [&](int d) {
    double s = base[d];
    for (int k = contrib_start_[d]; k < contrib_start_[d + 1]; ++k) s += solutions[contrib_sub_[k]][contrib_pos_[k]];
    z[d] = s;
  };

  z.resize(dim_);
  if (exec == Execution::kSerial) {
    for (int i = 0; i < ns; ++i) local_solve(i);
    for (int d = 0; d < dim_; ++d) combine(d);
    return;
  }
#pragma omp parallel
  {
#pragma omp for schedule(dynamic)
    for (int i = 0; i < ns; ++i) local_solve(i);
#pragma omp for schedule(static)
    for (int d = 0; d < dim_; ++d) combine(d);
  }
}

}  // namespace mdgs
