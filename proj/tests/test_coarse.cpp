#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>

#include "mdgs/coarse.hpp"
#include "mdgs/dg.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace mdgs;

namespace {

struct Setup {
  FineMesh fine;
  CoarseMesh coarse;
  Setup(int n, int m) : fine(build_fine_mesh(n)), coarse(build_coarse_mesh(fine, m)) {}
};

}  // namespace

TEST_CASE("basis type names") {
  CHECK(parse_basis_type("linear") == BasisType::kLinear);
  CHECK(parse_basis_type("ms-linear") == BasisType::kMsLinear);
  CHECK(parse_basis_type("ms-oscillatory") == BasisType::kMsOscillatory);
  CHECK(parse_basis_type("ms-osc") == BasisType::kMsOscillatory);
  CHECK(std::string(to_string(BasisType::kMsLinear)) == "ms-linear");
  CHECK_THROWS_AS(parse_basis_type("quadratic"), Error);
}

TEST_CASE("element vertex sets") {
  Setup s(16, 4);
  for (int K = 0; K < s.coarse.num_triangles(); ++K) {
    auto ev = element_vertices(s.fine, s.coarse, K);
    CHECK(ev.all.size() == 15u);  // (m+1)(m+2)/2
    CHECK(ev.boundary.size() == 12u);
    CHECK(ev.interior.size() == 3u);
  }
  const auto& E = s.coarse.edges[0];
  auto path = edge_vertex_path(s.fine, s.coarse, E);
  CHECK(path.size() == 5u);
  CHECK(path.front() == s.coarse.fine_vertex(s.fine, E.vertices[0]));
  CHECK(path.back() == s.coarse.fine_vertex(s.fine, E.vertices[1]));
}

TEST_CASE("linear boundary data") {
  Setup s(16, 8);
  const auto& K = s.coarse.triangles[0];
  for (int p = 0; p < 3; ++p) {
    auto psi = linear_boundary_data(s.fine, s.coarse, 0, p);
    CHECK(psi.at(s.coarse.fine_vertex(s.fine, K.vertices[p])) == 1.0);
    CHECK(psi.at(s.coarse.fine_vertex(s.fine, K.vertices[(p + 1) % 3])) == 0.0);
    CHECK(psi.at(s.coarse.fine_vertex(s.fine, K.vertices[(p + 2) % 3])) == 0.0);
    for (int q : {(p + 1) % 3, (p + 2) % 3}) {
      const auto path = edge_vertex_path(s.fine, s.coarse, s.coarse.edges[K.edges[q]]);
      CHECK(psi.at(path[4]) == doctest::Approx(0.5).epsilon(1e-15));  // edge midpoint
    }
    for (int v : edge_vertex_path(s.fine, s.coarse, s.coarse.edges[K.edges[p]])) CHECK(psi.at(v) == 0.0);
  }
}

TEST_CASE("oscillatory boundary data") {
  // One H-cell split into two coarse triangles, two fine segments per coarse edge.
  Setup s(2, 2);
  auto field = constant_field(s.fine, 1.0);
  for (int p = 0; p < 3; ++p) {
    auto lin = linear_boundary_data(s.fine, s.coarse, 0, p);
    auto osc = oscillatory_boundary_data(s.fine, s.coarse, field, 0, p);
    CHECK(lin.vertices == osc.vertices);
    for (std::size_t i = 0; i < lin.values.size(); ++i) CHECK(osc.values[i] == doctest::Approx(lin.values[i]));
  }
  // Lower coarse triangle, x_p = (1,0). On the bottom edge the segment next to
  // x_p has alpha = 3, the one next to (0,0) alpha = 1.
  field.values[s.fine.triangle_id(1, 0, false)] = 3.0;
  auto osc = oscillatory_boundary_data(s.fine, s.coarse, field, 0, 0);
  CHECK(osc.at(s.fine.vertex_id(1, 0)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(osc.at(s.fine.vertex_id(2, 1)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(osc.at(s.fine.vertex_id(2, 0)) == 1.0);
  CHECK(osc.at(s.fine.vertex_id(0, 0)) == 0.0);

  // A very stiff segment in the middle of an edge leaves the data flat across it.
  Setup t(8, 8);
  auto stiff = constant_field(t.fine, 1.0);
  stiff.values[t.fine.triangle_id(3, 0, false)] = 1e6;
  stiff.values[t.fine.triangle_id(4, 0, false)] = 1e6;
  auto flat = oscillatory_boundary_data(t.fine, t.coarse, stiff, 0, 0);
  CHECK(std::abs(flat.at(t.fine.vertex_id(5, 0)) - flat.at(t.fine.vertex_id(3, 0))) < 1e-5);
  CHECK(flat.at(t.fine.vertex_id(3, 0)) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("harmonic extension of simple data") {
  Setup s(16, 8);
  auto field = constant_field(s.fine, 1.0);
  for (int K : {0, 3}) {
    auto ev = element_vertices(s.fine, s.coarse, K);
    VertexFunction ones{ev.boundary, std::vector<double>(ev.boundary.size(), 1.0)};
    auto ext = harmonic_extension(s.fine, s.coarse, field, K, ones);
    for (double v : ext.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(element_energy(s.fine, s.coarse, field, K, ext) < 1e-12);  // roundoff of the gradient differences

    for (int p = 0; p < 3; ++p) {
      auto phi = harmonic_extension(s.fine, s.coarse, field, K, linear_boundary_data(s.fine, s.coarse, K, p));
      const auto& T = s.coarse.triangles[K];
      for (std::size_t i = 0; i < phi.vertices.size(); ++i) {
        const Point x = s.fine.vertex(phi.vertices[i]);
        const Point a = T.coords[(p + 1) % 3], b = T.coords[(p + 2) % 3], c = T.coords[p];
        auto cross = [](Point u, Point v) { return u.x * v.y - u.y * v.x; };
        const double affine = cross(b - a, x - a) / cross(b - a, c - a);
        CHECK(phi.values[i] == doctest::Approx(affine).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("property: harmonic extension minimizes energy") {
  testing::Gen gen(53);
  Setup s(16, 8);
  auto field = gen.field(s.fine, 6.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int K = gen.integer(0, s.coarse.num_triangles() - 1);
    const int p = gen.integer(0, 2);
    auto phi = harmonic_extension(s.fine, s.coarse, field, K,
                                  oscillatory_boundary_data(s.fine, s.coarse, field, K, p));
    const auto ev = element_vertices(s.fine, s.coarse, K);
    VertexFunction theta = phi;
    const double amp = gen.log_uniform(1e-6, 1.0);
    for (std::size_t i = 0; i < theta.vertices.size(); ++i)
      if (std::binary_search(ev.interior.begin(), ev.interior.end(), theta.vertices[i]))
        theta.values[i] += amp * gen.uniform(-1.0, 1.0);
    const double e_phi = element_energy(s.fine, s.coarse, field, K, phi);
    const double e_theta = element_energy(s.fine, s.coarse, field, K, theta);
    CHECK(e_phi <= e_theta * (1 + 1e-12));
  }
}

TEST_CASE("property: coarse bases form a partition of unity") {
  testing::Gen gen(59);
  for (int trial = 0; trial < 3; ++trial) {
    Setup s(16, gen.integer(0, 1) ? 4 : 8);
    auto field = gen.field(s.fine, 8.0);
    for (auto type : {BasisType::kLinear, BasisType::kMsLinear, BasisType::kMsOscillatory}) {
      auto space = build_coarse_space(s.fine, s.coarse, field, type);
      CHECK(space.dim() == 3 * s.coarse.num_triangles());
      // Row sums of P are 1 at every fine dof.
      const Eigen::VectorXd ones = Eigen::VectorXd::Ones(space.dim());
      const Eigen::VectorXd sums = space.prolongation * ones;
      CHECK((sums.array() - 1.0).abs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("basis types coincide for smooth or inclusion media") {
  Setup s(32, 8);
  auto unit = constant_field(s.fine, 1.0);
  auto lin = build_coarse_space(s.fine, s.coarse, unit, BasisType::kLinear);
  auto msl = build_coarse_space(s.fine, s.coarse, unit, BasisType::kMsLinear);
  auto mso = build_coarse_space(s.fine, s.coarse, unit, BasisType::kMsOscillatory);
  CHECK((Eigen::MatrixXd(lin.prolongation) - Eigen::MatrixXd(msl.prolongation)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((Eigen::MatrixXd(lin.prolongation) - Eigen::MatrixXd(mso.prolongation)).cwiseAbs().maxCoeff() < 1e-12);
  // Right-angle vertex: |grad|^2 = 2/H^2 on area H^2/2. Acute vertices: half of that.
  for (std::size_t i = 0; i < lin.energies.size(); ++i)
    CHECK(lin.energies[i] == doctest::Approx(i % 3 == 0 ? 1.0 : 0.5).epsilon(1e-12));

  auto binary = binary_inclusions(s.fine, s.coarse, 1e4);
  auto bl = build_coarse_space(s.fine, s.coarse, binary, BasisType::kMsLinear);
  auto bo = build_coarse_space(s.fine, s.coarse, binary, BasisType::kMsOscillatory);
  CHECK((Eigen::MatrixXd(bl.prolongation) - Eigen::MatrixXd(bo.prolongation)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("coarse dimension at the table resolution") {
  auto fine = build_fine_mesh(128);
  auto coarse = build_coarse_mesh(fine, 8);
  auto space = build_coarse_space(fine, coarse, constant_field(fine, 1.0), BasisType::kLinear);
  CHECK(space.dim() == 1536);
  CHECK(space.prolongation.rows() == 98304);
}

TEST_CASE("Galerkin operator equals the direct coarse form") {
  testing::Gen gen(61);
  Setup s(8, 4);
  for (auto field : {constant_field(s.fine, 1.0), gen.field(s.fine, 6.0)}) {
    for (auto type : {BasisType::kMsLinear, BasisType::kMsOscillatory}) {
      auto space = build_coarse_space(s.fine, s.coarse, field, type);
      auto a = assemble_operator(s.fine, field, 4.0);
      const Eigen::MatrixXd galerkin = Eigen::MatrixXd(coarse_operator(a, space).matrix());
      const Eigen::MatrixXd direct = testing::direct_coarse_form(s.fine, s.coarse, field, 4.0, space);
      CHECK((galerkin - direct).cwiseAbs().maxCoeff() <= 1e-12 * direct.cwiseAbs().maxCoeff());
      CHECK(coarse_operator(a, space).is_symmetric());
    }
  }
}

TEST_CASE("single H-cell coarse operator is SPD") {
  Setup s(4, 4);
  auto field = constant_field(s.fine, 1.0);
  auto space = build_coarse_space(s.fine, s.coarse, field, BasisType::kLinear);
  auto a0 = coarse_operator(assemble_operator(s.fine, field, 4.0), space);
  CHECK(a0.dim() == 6);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(a0.matrix())};
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}
