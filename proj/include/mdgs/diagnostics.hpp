#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "mdgs/coarse.hpp"
#include "mdgs/coeff.hpp"
#include "mdgs/mesh.hpp"

namespace mdgs {

/// Largest weighted energy |phi_{p,K}|^2_{1,alpha,K} over the basis.
double gamma_indicator(const CoarseSpace& space);

/// Weighted squared jumps of the basis across coarse edges. `interior` runs
/// over coarse edges shared by two triangles, `boundary` over those on the
/// domain boundary; both maximize over the two endpoint vertices.
struct BetaIndicator {
  double interior = 0.0;
  double boundary = 0.0;
  double max() const { return interior > boundary ? interior : boundary; }
};

BetaIndicator beta_indicator(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field,
                             const CoarseSpace& space);

/// Largest W_e over fine edges lying on interior coarse edges.
double max_interface_weight(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field);

/// Nodal values of the ramp partition of unity for subdomain i: a tensor
/// product of 1D ramps of total width delta centred on every subdomain
/// interface, flat on the domain boundary.
std::vector<double> partition_of_unity(const FineMesh& fine, const SubdomainPartition& partition, int i);

/// max_i delta^2 |alpha |grad chi_i|^2|_inf for the ramp partition of unity.
double pi_indicator(const FineMesh& fine, const SubdomainPartition& partition, const CoefficientField& field);

/// Coarse coefficients holding, for each coarse dof (K, p), the mean of u over
/// the patch of coarse triangles sharing the vertex x_p.
Eigen::VectorXd restriction_RH(const FineMesh& fine, const CoarseMesh& coarse, const Eigen::VectorXd& u);

/// Separation and coverage of the region {alpha > rho} inside one coarse triangle.
struct ElementAssumption {
  int components = 0;
  int interior_components = 0;
  int boundary_components = 0;
  double epsilon = 0.0;               // barycenter distance between the classes minus h; inf if a class is empty
  bool separated = true;              // epsilon >= h or a class is empty
  bool boundary_constant = true;      // alpha constant on each boundary-touching component
  double min_uncovered_fraction = 1.0;  // over the three coarse edges
  bool covered = true;                // min_uncovered_fraction >= threshold

  bool holds() const { return separated && boundary_constant && covered; }
};

std::vector<ElementAssumption> assumption_check(const FineMesh& fine, const CoarseMesh& coarse,
                                                const CoefficientField& field, double rho,
                                                double coverage_threshold = 0.5);

struct LambdaBounds {
  double nonoverlap = 0.0;
  double overlap = 0.0;  // NaN when no overlap is given
};

/// Condition-number predictions with the unknown constants dropped.
double lambda_nonoverlap(double eta, double max_w, double gamma_one, double H, double h, double gamma_alpha,
                         double beta_alpha);
double lambda_overlap(double pi_alpha, double gamma_one, double beta_one, double H, double delta,
                      double gamma_alpha, double eta, double beta_alpha);

struct IndicatorReport {
  double gamma_alpha = 0.0;
  double gamma_one = 0.0;
  BetaIndicator beta_alpha;
  BetaIndicator beta_one;
  /// Effective beta under homogeneous Dirichlet data: interior coarse edges only.
  double beta() const { return beta_alpha.interior; }
  std::optional<double> pi_alpha;
  double max_w = 0.0;
  LambdaBounds lambda;
};

/// Evaluates every indicator for `space`; the (1)-variants use a space of
/// the same type built on the unit field. `overlap` may be null.
IndicatorReport compute_indicators(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field,
                                   const CoarseSpace& space, double eta, const SubdomainPartition* overlap);

}  // namespace mdgs
