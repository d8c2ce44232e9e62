#include "mdgs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdgs {
namespace {

int local_vertex(const CoarseTriangle& K, int coarse_vertex) {
  for (int k = 0; k < 3; ++k)
    if (K.vertices[k] == coarse_vertex) return k;
  throw Error(ErrorKind::kInternal, "coarse vertex not in triangle");
}

// Integral of W/h_e * d^2 over a fine edge where d is linear with end values a, b.
double weighted_square(double W, double a, double b) { return W / 3.0 * (a * a + a * b + b * b); }

// 1D ramp factor of subdomain index I at grid coordinate i. Each ramp spans
// `layers` cells starting floor(layers/2) cells before the interface, so its
// end points are grid nodes and the nodal interpolant keeps slope 1/delta.
double ramp(int i, int I, int per_side, int m, int layers) {
  double v = 1.0;
  const int lead = layers / 2;
  auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
  if (I > 0) v = std::min(v, clamp01(static_cast<double>(i - I * m + lead) / layers));
  if (I < per_side - 1) v = std::min(v, clamp01(static_cast<double>((I + 1) * m - lead + layers - i) / layers));
  return v;
}

double chi(const FineMesh& fine, const SubdomainPartition& partition, int m, int sub, int vertex) {
  const int stride = fine.n + 1;
  const int I = sub % partition.per_side, J = sub / partition.per_side;
  return ramp(vertex % stride, I, partition.per_side, m, partition.overlap_layers) *
         ramp(vertex / stride, J, partition.per_side, m, partition.overlap_layers);
}

int subdomain_cells(const FineMesh& fine, const SubdomainPartition& partition) {
  return fine.n / partition.per_side;
}

}  // namespace

double gamma_indicator(const CoarseSpace& space) {
  return space.energies.empty() ? 0.0 : *std::max_element(space.energies.begin(), space.energies.end());
}

BetaIndicator beta_indicator(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field,
                             const CoarseSpace& space) {
  BetaIndicator beta;
  for (const auto& E : coarse.edges) {
    const auto path = edge_vertex_path(fine, coarse, E);
    const auto& Kp = coarse.triangles[E.plus];
    for (int cv : E.vertices) {
      const auto& phi_plus = space.basis[3 * E.plus + local_vertex(Kp, cv)];
      const VertexFunction* phi_minus = nullptr;
      if (!E.is_boundary()) phi_minus = &space.basis[3 * E.minus + local_vertex(coarse.triangles[E.minus], cv)];
      auto trace = [&](int v) { return phi_plus.at(v) - (phi_minus ? phi_minus->at(v) : 0.0); };
      double sum = 0.0;
      for (std::size_t s = 0; s < E.fine_edges.size(); ++s) {
        const auto& e = fine.edges[E.fine_edges[s]];
        sum += weighted_square(edge_weights(e, field).W, trace(path[s]), trace(path[s + 1]));
      }
      double& slot = E.is_boundary() ? beta.boundary : beta.interior;
      slot = std::max(slot, sum);
    }
  }
  return beta;
}

double max_interface_weight(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field) {
  double w = 0.0;
  for (const auto& E : coarse.edges) {
    if (E.is_boundary()) continue;
    for (int fe : E.fine_edges) w = std::max(w, edge_weights(fine.edges[fe], field).W);
  }
  return w;
}

std::vector<double> partition_of_unity(const FineMesh& fine, const SubdomainPartition& partition, int i) {
  if (partition.overlap_layers < 1)
    throw Error(ErrorKind::kInvalidConfiguration, "partition of unity needs overlap >= 1");
  const int m = subdomain_cells(fine, partition);
  std::vector<double> values(fine.num_vertices());
  for (int v = 0; v < fine.num_vertices(); ++v) values[v] = chi(fine, partition, m, i, v);
  return values;
}

double pi_indicator(const FineMesh& fine, const SubdomainPartition& partition, const CoefficientField& field) {
  if (partition.overlap_layers < 1)
    throw Error(ErrorKind::kInvalidConfiguration, "partition indicator needs overlap >= 1");
  const int m = subdomain_cells(fine, partition);
  const int s = partition.per_side;
  const double delta2 = partition.delta * partition.delta;
  double pi = 0.0;
  for (int t = 0; t < fine.num_triangles(); ++t) {
    const auto& tri = fine.triangles[t];
    const auto grads = basis_gradients(tri);
    const int I0 = tri.cell_i / m, J0 = tri.cell_j / m;
    for (int J = std::max(0, J0 - 1); J <= std::min(s - 1, J0 + 1); ++J)
      for (int I = std::max(0, I0 - 1); I <= std::min(s - 1, I0 + 1); ++I) {
        const int sub = J * s + I;
        Point g{0.0, 0.0};
        for (int k = 0; k < 3; ++k) g = g + chi(fine, partition, m, sub, tri.vertices[k]) * grads[k];
        pi = std::max(pi, delta2 * field.values[t] * dot(g, g));
      }
  }
  return pi;
}

Eigen::VectorXd restriction_RH(const FineMesh& fine, const CoarseMesh& coarse, const Eigen::VectorXd& u) {
  if (u.size() != fine.num_dofs()) throw Error(ErrorKind::kDimensionMismatch, "restriction input");
  std::vector<double> integral(coarse.num_vertices(), 0.0), area(coarse.num_vertices(), 0.0);
  for (const auto& K : coarse.triangles) {
    double iu = 0.0, ak = 0.0;
    for (int t : K.fine_triangles) {
      const double a = fine.triangles[t].area;
      iu += a * (u[dof_index(t, 0)] + u[dof_index(t, 1)] + u[dof_index(t, 2)]) / 3.0;
      ak += a;
    }
    for (int v : K.vertices) {
      integral[v] += iu;
      area[v] += ak;
    }
  }
  Eigen::VectorXd c(3 * coarse.num_triangles());
  for (int K = 0; K < coarse.num_triangles(); ++K)
    for (int p = 0; p < 3; ++p) {
      const int v = coarse.triangles[K].vertices[p];
      c[3 * K + p] = integral[v] / area[v];
    }
  return c;
}

std::vector<ElementAssumption> assumption_check(const FineMesh& fine, const CoarseMesh& coarse,
                                                const CoefficientField& field, double rho,
                                                double coverage_threshold) {
  if (!(rho >= 1.0)) throw Error(ErrorKind::kInvalidValue, "rho must be >= 1");
  std::vector<ElementAssumption> reports(coarse.num_triangles());
  std::vector<int> label(fine.triangles.size(), -1);
  for (int K = 0; K < coarse.num_triangles(); ++K) {
    auto& rep = reports[K];
    const auto& tris = coarse.triangles[K].fine_triangles;
    const auto ev = element_vertices(fine, coarse, K);
    auto on_boundary = [&](int v) { return std::binary_search(ev.boundary.begin(), ev.boundary.end(), v); };

    // Components of the high region by edge adjacency inside K.
    std::vector<std::vector<int>> comps;
    for (int t0 : tris) {
      if (field.values[t0] <= rho || label[t0] >= 0) continue;
      comps.emplace_back();
      std::vector<int> stack{t0};
      label[t0] = static_cast<int>(comps.size()) - 1;
      while (!stack.empty()) {
        const int t = stack.back();
        stack.pop_back();
        comps.back().push_back(t);
        for (int fe : fine.triangles[t].edges) {
          const auto& e = fine.edges[fe];
          if (e.is_boundary()) continue;
          const int nb = e.plus == t ? e.minus : e.plus;
          if (coarse.fine_to_coarse[nb] != K || field.values[nb] <= rho || label[nb] >= 0) continue;
          label[nb] = label[t];
          stack.push_back(nb);
        }
      }
    }
    std::vector<int> interior_tris, boundary_tris;
    for (const auto& comp : comps) {
      bool touches = false;
      for (int t : comp)
        for (int v : fine.triangles[t].vertices) touches = touches || on_boundary(v);
      auto& dest = touches ? boundary_tris : interior_tris;
      dest.insert(dest.end(), comp.begin(), comp.end());
      ++(touches ? rep.boundary_components : rep.interior_components);
      if (touches) {
        for (int t : comp) rep.boundary_constant = rep.boundary_constant && field.values[t] == field.values[comp[0]];
      }
    }
    rep.components = static_cast<int>(comps.size());
    for (int t : tris) label[t] = -1;

    rep.epsilon = std::numeric_limits<double>::infinity();
    for (int a : interior_tris) {
      const auto& ta = fine.triangles[a];
      const Point ba = (1.0 / 3.0) * (ta.coords[0] + ta.coords[1] + ta.coords[2]);
      for (int b : boundary_tris) {
        const auto& tb = fine.triangles[b];
        const Point d = (1.0 / 3.0) * (tb.coords[0] + tb.coords[1] + tb.coords[2]) - ba;
        rep.epsilon = std::min(rep.epsilon, std::hypot(d.x, d.y) - fine.h);
      }
    }
    rep.separated = rep.epsilon >= fine.h * (1.0 - 1e-12);

    for (int ce : coarse.triangles[K].edges) {
      double uncovered = 0.0, total = 0.0;
      for (int fe : coarse.edges[ce].fine_edges) {
        const auto& e = fine.edges[fe];
        const int inside = coarse.fine_to_coarse[e.plus] == K ? e.plus : e.minus;
        total += e.length;
        if (field.values[inside] <= rho) uncovered += e.length;
      }
      rep.min_uncovered_fraction = std::min(rep.min_uncovered_fraction, uncovered / total);
    }
    rep.covered = rep.min_uncovered_fraction >= coverage_threshold;
  }
  return reports;
}

double lambda_nonoverlap(double eta, double max_w, double gamma_one, double H, double h, double gamma_alpha,
                         double beta_alpha) {
  return eta * max_w * gamma_one * H / h + std::max(gamma_alpha, eta * beta_alpha);
}

double lambda_overlap(double pi_alpha, double gamma_one, double beta_one, double H, double delta,
                      double gamma_alpha, double eta, double beta_alpha) {
  if (!(delta > 0.0)) throw Error(ErrorKind::kInvalidConfiguration, "overlapping bound needs delta > 0");
  return pi_alpha * std::max(gamma_one, beta_one) * H / delta + std::max(gamma_alpha, eta * beta_alpha);
}

IndicatorReport compute_indicators(const FineMesh& fine, const CoarseMesh& coarse, const CoefficientField& field,
                                   const CoarseSpace& space, double eta, const SubdomainPartition* overlap) {
  IndicatorReport rep;
  const auto unit = constant_field(fine, 1.0);
  const auto unit_space = build_coarse_space(fine, coarse, unit, space.type, space.trace);
  rep.gamma_alpha = gamma_indicator(space);
  rep.gamma_one = gamma_indicator(unit_space);
  rep.beta_alpha = beta_indicator(fine, coarse, field, space);
  rep.beta_one = beta_indicator(fine, coarse, unit, unit_space);
  rep.max_w = max_interface_weight(fine, coarse, field);
  rep.lambda.nonoverlap =
      lambda_nonoverlap(eta, rep.max_w, rep.gamma_one, coarse.H, fine.h, rep.gamma_alpha, rep.beta());
  rep.lambda.overlap = std::numeric_limits<double>::quiet_NaN();
  if (overlap && overlap->overlap_layers > 0) {
    rep.pi_alpha = pi_indicator(fine, *overlap, field);
    rep.lambda.overlap = lambda_overlap(*rep.pi_alpha, rep.gamma_one, rep.beta_one.interior, coarse.H,
                                        overlap->delta, rep.gamma_alpha, eta, rep.beta());
  }
  return rep;
}

}  // namespace mdgs
