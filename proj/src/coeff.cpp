#include "mdgs/coeff.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

namespace mdgs {
namespace {

Point barycenter(const Triangle& t) {
  return (1.0 / 3.0) * (t.coords[0] + t.coords[1] + t.coords[2]);
}

void require_resolved_inclusions(const CoarseMesh& coarse) {
  if (coarse.m < 8) throw Error(ErrorKind::kInvalidConfiguration, "this medium needs H >= 8h");
}

struct Rect {
  double x0, x1, y0, y1;
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

}  // namespace

double CoefficientField::min() const { return *std::min_element(values.begin(), values.end()); }
double CoefficientField::max() const { return *std::max_element(values.begin(), values.end()); }

CoefficientField constant_field(const FineMesh& mesh, double value) {
  if (!(value > 0.0)) throw Error(ErrorKind::kInvalidValue, "conductivity must be positive");
  return {mesh.n, std::vector<double>(mesh.triangles.size(), value), "constant:" + format_value(value)};
}

CoefficientField binary_inclusions(const FineMesh& mesh, const CoarseMesh& coarse, double alpha_hat,
                                   bool require_resolved) {
  if (!(alpha_hat > 0.0)) throw Error(ErrorKind::kInvalidValue, "alpha_hat must be positive");
  if (require_resolved) require_resolved_inclusions(coarse);
  CoefficientField field{mesh.n, std::vector<double>(mesh.triangles.size(), 1.0),
                         "binary:" + format_value(alpha_hat)};
  const double H = coarse.H;
  const int nc = coarse.cells_per_side;
  auto in_band = [](double d) { return d >= 0.125 && d <= 0.375; };
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Point b = barycenter(mesh.triangles[t]);
    const int I = std::min(static_cast<int>(b.x / H), nc - 1);
    const int J = std::min(static_cast<int>(b.y / H), nc - 1);
    const double u = b.x / H - I;
    const double v = b.y / H - J;
    // Lower coarse triangle has its right angle at (1,0), upper at (0,1).
    const bool inside = (v < u) ? (in_band(1.0 - u) && in_band(v)) : (in_band(u) && in_band(1.0 - v));
    if (inside) field.values[t] = alpha_hat;
  }
  return field;
}

CoefficientField channel_field(const FineMesh& mesh, const CoarseMesh& coarse, double alpha_hat,
                               ChannelLayout layout, bool require_resolved) {
  if (!(alpha_hat > 0.0)) throw Error(ErrorKind::kInvalidValue, "alpha_hat must be positive");
  if (require_resolved) require_resolved_inclusions(coarse);
  const double h = mesh.h;
  const double H = coarse.H;
  const bool crossing = layout == ChannelLayout::kCrossing;
  std::vector<Rect> channels;
  for (const auto& E : coarse.edges) {
    if (E.is_boundary()) continue;
    const Point a = E.coords[0], b = E.coords[1];
    const double x = std::min(a.x, b.x), y = std::min(a.y, b.y);
    if (a.x == b.x) {
      const double yc = y + 0.5 * H;
      channels.push_back({x - 2 * h, crossing ? x + 2 * h : x, yc - h, yc + h});
    } else if (a.y == b.y) {
      const double xc = x + 0.5 * H;
      channels.push_back({xc - h, xc + h, y - 2 * h, crossing ? y + 2 * h : y});
    }
  }
  CoefficientField field{mesh.n, std::vector<double>(mesh.triangles.size(), 1.0),
                         std::string(crossing ? "channels-crossing:" : "channels-touching:") +
                             format_value(alpha_hat)};
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Point p = barycenter(mesh.triangles[t]);
    for (const auto& r : channels)
      if (r.contains(p)) {
        field.values[t] = alpha_hat;
        break;
      }
  }
  return field;
}

double spherical_covariance(double r, double theta, double sigma2) {
  if (r >= theta) return 0.0;
  const double s = r / theta;
  return sigma2 * (1.0 - 1.5 * s + 0.5 * s * s * s);
}

std::vector<double> sample_gaussian_field(const GrfSpec& spec) {
  const int N = spec.grid_size;
  if (N < 2 || (N & (N - 1)) != 0)
    throw Error(ErrorKind::kInvalidConfiguration, "random field grid size must be a power of two");
  if (!(spec.theta > 0.0)) throw Error(ErrorKind::kInvalidValue, "covariance range must be positive");
  if (spec.sigma2 < 0.0) throw Error(ErrorKind::kInvalidValue, "variance must be nonnegative");
  if (spec.sigma2 == 0.0) return std::vector<double>(static_cast<std::size_t>(N) * N, 0.0);

  const int M = 2 * N;
  const std::size_t total = static_cast<std::size_t>(M) * M;
  std::unique_ptr<fftw_complex[], decltype(&fftw_free)> buf(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total)), &fftw_free);
  std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan(
      fftw_plan_dft_2d(M, M, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE));

  for (int k = 0; k < M; ++k) {
    const double dy = std::min(k, M - k);
    for (int l = 0; l < M; ++l) {
      const double dx = std::min(l, M - l);
      auto& z = buf[static_cast<std::size_t>(k) * M + l];
      z[0] = spherical_covariance(std::hypot(dx, dy), spec.theta, spec.sigma2);
      z[1] = 0.0;
    }
  }
  fftw_execute(plan.get());

  std::vector<double> eig(total);
  double positive = 0.0, negative = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    eig[i] = buf[i][0];
    (eig[i] >= 0.0 ? positive : negative) += std::abs(eig[i]);
  }
  if (negative > 1e-8 * (positive - negative))
    throw Error(ErrorKind::kDegradedEmbedding,
                "circulant embedding has negative spectral mass " + std::to_string(negative / positive));

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) {
    const double amp = std::sqrt(std::max(eig[i], 0.0) * scale);
    const double re = normal(rng);
    const double im = normal(rng);
    buf[i][0] = amp * re;
    buf[i][1] = amp * im;
  }
  fftw_execute(plan.get());

  std::vector<double> sample(static_cast<std::size_t>(N) * N);
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l)
      sample[static_cast<std::size_t>(k) * N + l] = buf[static_cast<std::size_t>(k) * M + l][0];
  return sample;
}

namespace {

std::vector<double> sample_at_triangles(const FineMesh& mesh, const GrfSpec& spec,
                                        const std::vector<double>& pixels) {
  const int N = spec.grid_size;
  std::vector<double> z(mesh.triangles.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Point b = barycenter(mesh.triangles[t]);
    const int px = std::min(N - 1, static_cast<int>(b.x * N));
    const int py = std::min(N - 1, static_cast<int>(b.y * N));
    z[t] = pixels[static_cast<std::size_t>(py) * N + px];
  }
  return z;
}

std::string lognormal_provenance(const GrfSpec& spec) {
  std::ostringstream os;
  os << "lognormal:" << format_value(spec.sigma2) << ':' << format_value(spec.theta) << ':' << spec.seed
     << ':' << spec.grid_size;
  return os.str();
}

void check_grid_covers_mesh(const FineMesh& mesh, const GrfSpec& spec) {
  if (spec.grid_size < mesh.n)
    throw Error(ErrorKind::kInvalidConfiguration, "random field grid is coarser than the mesh");
}

}  // namespace

CoefficientField lognormal_field(const FineMesh& mesh, const GrfSpec& spec) {
  check_grid_covers_mesh(mesh, spec);
  auto z = sample_at_triangles(mesh, spec, sample_gaussian_field(spec));
  CoefficientField field{mesh.n, std::vector<double>(z.size()), lognormal_provenance(spec)};
  for (std::size_t t = 0; t < z.size(); ++t) field.values[t] = std::exp(z[t]);
  return field;
}

CoefficientField lognormal_field_with_contrast(const FineMesh& mesh, GrfSpec spec, double target_contrast,
                                               double* sigma2_out) {
  if (!(target_contrast >= 1.0)) throw Error(ErrorKind::kInvalidValue, "contrast must be >= 1");
  check_grid_covers_mesh(mesh, spec);
  spec.sigma2 = 1.0;
  auto z = sample_at_triangles(mesh, spec, sample_gaussian_field(spec));
  const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
  // Realized log-contrast is sigma * (max z - min z) for the unit-variance sample.
  const double sigma = std::log(target_contrast) / (*hi - *lo);
  spec.sigma2 = sigma * sigma;
  if (sigma2_out) *sigma2_out = spec.sigma2;
  CoefficientField field{mesh.n, std::vector<double>(z.size()), lognormal_provenance(spec)};
  for (std::size_t t = 0; t < z.size(); ++t) field.values[t] = std::exp(sigma * (z[t] - *lo));
  return field;
}

CoefficientField scaled(const CoefficientField& field, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorKind::kInvalidValue, "scale factor must be positive");
  CoefficientField out = field;
  for (double& v : out.values) v *= factor;
  out.provenance += "*" + format_value(factor);
  return out;
}

void write_field(std::ostream& os, const CoefficientField& field) {
  os << "MDGS-ALPHA 1 " << field.n << '\n';
  char buf[64];
  for (double v : field.values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    os << buf;
  }
}

CoefficientField read_field(std::istream& is) {
  std::string magic;
  int version = 0, n = 0;
  if (!(is >> magic >> version >> n) || magic != "MDGS-ALPHA" || version != 1 || n < 1)
    throw Error(ErrorKind::kIo, "not an MDGS-ALPHA v1 field");
  CoefficientField field{n, std::vector<double>(2 * static_cast<std::size_t>(n) * n), "file"};
  for (double& v : field.values) {
    if (!(is >> v)) throw Error(ErrorKind::kIo, "field file is truncated");
    if (!(v > 0.0)) throw Error(ErrorKind::kInvalidValue, "field file holds a nonpositive value");
  }
  return field;
}

CoefficientField read_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  auto field = read_field(in);
  field.provenance = "file:" + path;
  return field;
}

}  // namespace mdgs
