#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "mdgs/diagnostics.hpp"
#include "support.hpp"

using namespace mdgs;

namespace {

int argmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST_CASE("restriction keeps constants") {
  auto fine = build_fine_mesh(32);
  auto coarse = build_coarse_mesh(fine, 8);
  for (double c : {1.0, -2.5, 1e6}) {
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(fine.num_dofs(), c);
    const Eigen::VectorXd rh = restriction_RH(fine, coarse, u);
    CHECK((rh.array() - c).abs().maxCoeff() <= 1e-12 * std::abs(c));
    auto space = build_coarse_space(fine, coarse, constant_field(fine, 1.0), BasisType::kLinear);
    const Eigen::VectorXd back = space.prolongation * rh;
    CHECK((back.array() - c).abs().maxCoeff() <= 1e-12 * std::abs(c));
  }
  CHECK_THROWS_AS(restriction_RH(fine, coarse, Eigen::VectorXd::Ones(5)), Error);
}

TEST_CASE("restriction of a single coarse triangle indicator") {
  auto fine = build_fine_mesh(32);
  auto coarse = build_coarse_mesh(fine, 8);
  // Lower coarse triangle of H-cell (1,1); all its vertices are interior with six-triangle patches.
  const int K = 2 * (1 * 4 + 1);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(fine.num_dofs());
  for (int t : coarse.triangles[K].fine_triangles) u.segment<3>(3 * t).setOnes();
  const Eigen::VectorXd rh = restriction_RH(fine, coarse, u);
  for (int p = 0; p < 3; ++p) CHECK(rh[3 * K + p] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("beta vanishes for continuous media across coarse edges") {
  auto fine = build_fine_mesh(64);
  auto coarse = build_coarse_mesh(fine, 8);
  auto binary = binary_inclusions(fine, coarse, 1e6);
  for (auto type : {BasisType::kMsLinear, BasisType::kMsOscillatory}) {
    auto space = build_coarse_space(fine, coarse, binary, type);
    CHECK(beta_indicator(fine, coarse, binary, space).interior == 0.0);
  }
  testing::Gen gen(107);
  auto unit = constant_field(fine, 1.0);
  for (auto type : {BasisType::kLinear, BasisType::kMsLinear, BasisType::kMsOscillatory}) {
    auto space = build_coarse_space(fine, coarse, unit, type);
    auto beta = beta_indicator(fine, coarse, unit, space);
    CHECK(beta.interior == 0.0);
    // The trace itself is penalized on the domain boundary.
    CHECK(beta.boundary > 0.0);
  }
}

TEST_CASE("gamma of the affine basis") {
  auto fine = build_fine_mesh(32);
  auto coarse = build_coarse_mesh(fine, 8);
  auto space = build_coarse_space(fine, coarse, constant_field(fine, 1.0), BasisType::kLinear);
  CHECK(gamma_indicator(space) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: indicators scale with the medium") {
  testing::Gen gen(109);
  auto fine = build_fine_mesh(32);
  auto coarse = build_coarse_mesh(fine, 8);
  for (int trial = 0; trial < 3; ++trial) {
    auto field = gen.field(fine, 4.0);
    const double s = gen.log_uniform(1e-3, 1e6);
    auto sfield = scaled(field, s);
    for (auto type : {BasisType::kMsLinear, BasisType::kMsOscillatory}) {
      auto a = build_coarse_space(fine, coarse, field, type);
      auto b = build_coarse_space(fine, coarse, sfield, type);
      CHECK(gamma_indicator(b) == doctest::Approx(s * gamma_indicator(a)).epsilon(1e-10));
      CHECK(argmax(a.energies) == argmax(b.energies));
      const double ba = beta_indicator(fine, coarse, field, a).interior;
      const double bb = beta_indicator(fine, coarse, sfield, b).interior;
      CHECK(bb == doctest::Approx(s * ba).epsilon(1e-9));

      auto part = build_partition(fine, coarse, 1);
      auto ra = compute_indicators(fine, coarse, field, a, 4.0, &part);
      auto rb = compute_indicators(fine, coarse, sfield, b, 4.0, &part);
      CHECK(ra.gamma_one == rb.gamma_one);
      CHECK(ra.beta_one.interior == rb.beta_one.interior);
      CHECK(*rb.pi_alpha == doctest::Approx(s * *ra.pi_alpha).epsilon(1e-12));
    }
  }
}

TEST_CASE("partition of unity and pi") {
  auto fine = build_fine_mesh(32);
  auto coarse = build_coarse_mesh(fine, 8);
  for (int layers : {1, 2, 4}) {
    auto part = build_partition(fine, coarse, layers);
    std::vector<double> sum(fine.num_vertices(), 0.0);
    for (int i = 0; i < part.size(); ++i) {
      auto chi = partition_of_unity(fine, part, i);
      for (int v = 0; v < fine.num_vertices(); ++v) {
        CHECK(chi[v] >= 0.0);
        sum[v] += chi[v];
        // support inside the extended subdomain
        if (chi[v] > 0.0) {
          const Point x = fine.vertex(v);
          const auto& s = part.subdomains[i];
          const double lo_x = s.cell_i * coarse.H - part.delta, hi_x = (s.cell_i + 1) * coarse.H + part.delta;
          const double lo_y = s.cell_j * coarse.H - part.delta, hi_y = (s.cell_j + 1) * coarse.H + part.delta;
          CHECK((x.x >= lo_x - 1e-12 && x.x <= hi_x + 1e-12 && x.y >= lo_y - 1e-12 && x.y <= hi_y + 1e-12));
        }
      }
    }
    for (double s : sum) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    const double pi = pi_indicator(fine, part, constant_field(fine, 1.0));
    // Two ramps of slope 1/delta meet at subdomain corners.
    CHECK(pi == doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(pi_indicator(fine, build_partition(fine, coarse, 0), constant_field(fine, 1.0)), Error);

  // Ramps of width 2h stay in the background of the inclusion medium.
  auto part = build_partition(fine, coarse, 2);
  CHECK(pi_indicator(fine, part, binary_inclusions(fine, coarse, 1e6)) ==
        pi_indicator(fine, part, constant_field(fine, 1.0)));
}

TEST_CASE("assumption check") {
  auto fine = build_fine_mesh(64);
  auto coarse = build_coarse_mesh(fine, 8);

  for (const auto& r : assumption_check(fine, coarse, constant_field(fine, 1.0), 1.0)) {
    CHECK(r.components == 0);
    CHECK(r.holds());
    CHECK(r.min_uncovered_fraction == 1.0);
  }
  for (const auto& r : assumption_check(fine, coarse, binary_inclusions(fine, coarse, 1e6), 1.0)) {
    CHECK(r.components == 1);
    CHECK(r.interior_components == 1);
    CHECK(r.boundary_components == 0);
    CHECK(r.min_uncovered_fraction == 1.0);
    CHECK(r.holds());
  }
  int with_boundary = 0;
  for (const auto& r : assumption_check(fine, coarse, channel_field(fine, coarse, 1e6, ChannelLayout::kTouching), 1.0)) {
    with_boundary += r.boundary_components > 0;
    CHECK(r.min_uncovered_fraction >= 1.0 - 2.0 / 8.0 - 1e-12);
    CHECK(r.boundary_constant);
    CHECK(r.holds());
  }
  CHECK(with_boundary > 0);
  CHECK_THROWS_AS(assumption_check(fine, coarse, constant_field(fine, 1.0), 0.5), Error);

  // A boundary-touching cell and an interior one: exactly h apart, then moved diagonally closer.
  auto f = constant_field(fine, 1.0);
  f.values[fine.triangle_id(4, 0, false)] = 10.0;
  f.values[fine.triangle_id(4, 2, false)] = 10.0;
  auto reps = assumption_check(fine, coarse, f, 1.0);
  CHECK(reps[0].boundary_components == 1);
  CHECK(reps[0].interior_components == 1);
  CHECK(reps[0].epsilon == doctest::Approx(fine.h).epsilon(1e-12));
  f.values[fine.triangle_id(4, 2, false)] = 1.0;
  f.values[fine.triangle_id(5, 1, false)] = 10.0;
  CHECK_FALSE(assumption_check(fine, coarse, f, 1.0)[0].separated);
}

TEST_CASE("lambda bounds") {
  // eta doubling doubles the first term exactly.
  const double l1 = lambda_nonoverlap(4.0, 3.0, 1.0, 0.25, 1.0 / 32, 0.0, 0.0);
  const double l2 = lambda_nonoverlap(8.0, 3.0, 1.0, 0.25, 1.0 / 32, 0.0, 0.0);
  CHECK(l2 == 2.0 * l1);
  CHECK(l1 == doctest::Approx(4.0 * 3.0 * 8.0));
  CHECK(lambda_nonoverlap(4.0, 1.0, 1.0, 8.0, 1.0, 1.44, 0.0) == doctest::Approx(32 + 1.44));
  CHECK(lambda_nonoverlap(4.0, 1.0, 1.0, 8.0, 1.0, 1.44, 2.0) == doctest::Approx(32 + 8.0));
  CHECK(lambda_overlap(2.0, 1.0, 0.5, 8.0, 2.0, 1.44, 4.0, 0.0) == doctest::Approx(2.0 * 4.0 + 1.44));
  CHECK_THROWS_AS(lambda_overlap(2.0, 1.0, 0.5, 8.0, 0.0, 1.44, 4.0, 0.0), Error);

  auto fine = build_fine_mesh(64);
  auto coarse = build_coarse_mesh(fine, 8);
  std::vector<double> lambdas;
  for (double a : {1e2, 1e6}) {
    auto field = channel_field(fine, coarse, a, ChannelLayout::kCrossing);
    auto space = build_coarse_space(fine, coarse, field, BasisType::kMsOscillatory);
    auto rep = compute_indicators(fine, coarse, field, space, 4.0, nullptr);
    CHECK(rep.max_w == a);
    CHECK_FALSE(rep.pi_alpha.has_value());
    CHECK(std::isnan(rep.lambda.overlap));
    lambdas.push_back(rep.lambda.nonoverlap);
  }
  CHECK(lambdas[1] / lambdas[0] == doctest::Approx(1e4).epsilon(0.05));
}
