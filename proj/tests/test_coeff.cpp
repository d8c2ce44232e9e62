#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "mdgs/coeff.hpp"
#include "mdgs/diagnostics.hpp"
#include "support.hpp"

using namespace mdgs;

TEST_CASE("constant field") {
  auto mesh = build_fine_mesh(4);
  auto f = constant_field(mesh, 1e6);
  CHECK(f.values.size() == 32u);
  CHECK(f.contrast() == 1.0);
  CHECK_THROWS_AS(constant_field(mesh, 0.0), Error);
  CHECK_THROWS_AS(constant_field(mesh, -1.0), Error);
}

TEST_CASE("binary inclusions") {
  auto fine = build_fine_mesh(16);
  auto coarse = build_coarse_mesh(fine, 8);
  auto unit = binary_inclusions(fine, coarse, 1.0);
  CHECK(unit.contrast() == 1.0);

  auto f = binary_inclusions(fine, coarse, 1e2);
  // A 2x2-cell square inside each of the 8 coarse triangles.
  int inside = 0;
  for (double v : f.values) inside += v == 1e2;
  CHECK(inside == 8 * 8);
  for (int t = 0; t < fine.num_triangles(); ++t)
    if (f.values[t] == 1e2) {
      const auto& tri = fine.triangles[t];
      const int a = tri.cell_i % 8, b = tri.cell_j % 8;
      const bool lower = coarse.triangles[coarse.fine_to_coarse[t]].upper == false;
      // cells [1,3) from the legs of the coarse right angle
      if (lower) {
        CHECK((7 - a >= 1 && 7 - a <= 2));
        CHECK((b >= 1 && b <= 2));
      } else {
        CHECK((a >= 1 && a <= 2));
        CHECK((7 - b >= 1 && 7 - b <= 2));
      }
    }
  for (double v : f.values) CHECK((v == 1.0 || v == 1e2));

  auto big_f = build_fine_mesh(128);
  auto big_c = build_coarse_mesh(big_f, 8);
  CHECK(max_interface_weight(big_f, big_c, binary_inclusions(big_f, big_c, 1e6)) == 1.0);

  CHECK_THROWS_AS(binary_inclusions(fine, coarse, 0.0), Error);
  auto c4 = build_coarse_mesh(fine, 4);
  CHECK_THROWS_AS(binary_inclusions(fine, c4, 10.0), Error);
  CHECK_NOTHROW(binary_inclusions(fine, c4, 10.0, false));
}

TEST_CASE("channel fields") {
  auto fine = build_fine_mesh(64);
  auto coarse = build_coarse_mesh(fine, 8);
  for (auto layout : {ChannelLayout::kCrossing, ChannelLayout::kTouching})
    CHECK(channel_field(fine, coarse, 1.0, layout).contrast() == 1.0);

  auto crossing = channel_field(fine, coarse, 1e6, ChannelLayout::kCrossing);
  auto touching = channel_field(fine, coarse, 1e6, ChannelLayout::kTouching);
  CHECK(max_interface_weight(fine, coarse, crossing) == 1e6);
  CHECK(max_interface_weight(fine, coarse, touching) <= 2.0);

  // Interior axis-aligned coarse edges: 2 * 7 * 8. Crossing: 2h x 4h, touching 2h x 2h.
  int n_cross = 0, n_touch = 0;
  for (double v : crossing.values) n_cross += v == 1e6;
  for (double v : touching.values) n_touch += v == 1e6;
  CHECK(n_cross == 112 * 2 * 8);
  CHECK(n_touch == 112 * 2 * 4);
}

TEST_CASE("spherical covariance") {
  CHECK(spherical_covariance(0.0, 50.0, 2.0) == 2.0);
  CHECK(spherical_covariance(50.0, 50.0, 2.0) == 0.0);
  CHECK(spherical_covariance(80.0, 50.0, 2.0) == 0.0);
  CHECK(spherical_covariance(25.0, 50.0, 1.0) == doctest::Approx(1.0 - 0.75 + 0.0625));
}

TEST_CASE("gaussian field sampling") {
  GrfSpec spec{64, 8.0, 7, 1.0};
  auto a = sample_gaussian_field(spec);
  auto b = sample_gaussian_field(spec);
  CHECK(a == b);
  spec.seed = 8;
  CHECK(sample_gaussian_field(spec) != a);

  spec.sigma2 = 0.0;
  auto zero = sample_gaussian_field(spec);
  CHECK(std::all_of(zero.begin(), zero.end(), [](double v) { return v == 0.0; }));
  auto mesh = build_fine_mesh(16);
  CHECK(lognormal_field(mesh, spec).contrast() == 1.0);

  spec.grid_size = 48;
  CHECK_THROWS_AS(sample_gaussian_field(spec), Error);
  spec.grid_size = 8;
  CHECK_THROWS_AS(lognormal_field(mesh, spec), Error);
}

TEST_CASE("gaussian field pointwise variance") {
  // Monte Carlo over seeds at a fixed pixel: the lag-0 variance is sigma2.
  const double sigma2 = 2.5;
  const int samples = 400;
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto z = sample_gaussian_field({16, 4.0, static_cast<std::uint64_t>(s), sigma2});
    for (int px : {0, 37, 200}) {
      sum += z[px];
      sum2 += z[px] * z[px];
    }
  }
  const double count = 3.0 * samples;
  const double mean = sum / count;
  const double var = sum2 / count - mean * mean;
  CHECK(std::abs(mean) < 0.2);
  CHECK(var == doctest::Approx(sigma2).epsilon(0.12));
}

TEST_CASE("log-normal field with target contrast") {
  auto mesh = build_fine_mesh(128);
  for (double target : {8.55e3, 1.28e13}) {
    double s2 = 0.0;
    auto f = lognormal_field_with_contrast(mesh, {256, 50.0, 1, 1.0}, target, &s2);
    CHECK(f.contrast() == doctest::Approx(target).epsilon(1e-9));
    CHECK(f.min() == 1.0);
    CHECK(s2 > 0.0);
  }
  CHECK_THROWS_AS(lognormal_field_with_contrast(mesh, {}, 0.5), Error);
}

TEST_CASE("field file round trip") {
  testing::Gen gen(3);
  auto mesh = build_fine_mesh(8);
  auto f = gen.field(mesh, 12.0);
  std::stringstream ss;
  write_field(ss, f);
  auto g = read_field(ss);
  CHECK(g.n == 8);
  CHECK(g.values == f.values);

  std::stringstream bad("MDGS-ALPHA 1 2\n1 2 3\n");
  CHECK_THROWS_AS(read_field(bad), Error);
  std::stringstream neg("MDGS-ALPHA 1 1\n1 -2\n");
  CHECK_THROWS_AS(read_field(neg), Error);
  std::stringstream magic("ALPHA 1 1\n1 1\n");
  CHECK_THROWS_AS(read_field(magic), Error);
}

TEST_CASE("property: generated media are positive and deterministic") {
  testing::Gen gen(11);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 8;
    const int n = m * gen.integer(1, 4);
    auto fine = build_fine_mesh(n);
    auto coarse = build_coarse_mesh(fine, m);
    const double a = gen.log_uniform(1e-3, 1e8);
    for (const auto& f : {binary_inclusions(fine, coarse, a), channel_field(fine, coarse, a, ChannelLayout::kCrossing),
                          channel_field(fine, coarse, a, ChannelLayout::kTouching)}) {
      CHECK(f.values.size() == fine.triangles.size());
      CHECK(f.min() > 0.0);
      std::set<double> distinct(f.values.begin(), f.values.end());
      CHECK(distinct.size() <= 2u);
    }
    CHECK(binary_inclusions(fine, coarse, a).values == binary_inclusions(fine, coarse, a).values);
  }
}
