#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mdgs/mesh.hpp"

namespace mdgs {

/// Piecewise constant conductivity, one value per fine triangle.
struct CoefficientField {
  int n = 0;
  std::vector<double> values;
  std::string provenance;

  double min() const;
  double max() const;
  double contrast() const { return max() / min(); }
};

/// Log-normal random medium on a square pixel grid. theta is the range of
/// the spherical covariance in pixels.
struct GrfSpec {
  int grid_size = 256;
  double theta = 50.0;
  std::uint64_t seed = 0;
  double sigma2 = 1.0;
};

enum class ChannelLayout { kCrossing, kTouching };

CoefficientField constant_field(const FineMesh& mesh, double value);

/// alpha_hat on a square of side H/4 inside every coarse triangle, offset H/8
/// from both legs; 1 elsewhere. Needs H >= 8h unless `require_resolved` is
/// false, in which case the rasterization is used as is.
CoefficientField binary_inclusions(const FineMesh& mesh, const CoarseMesh& coarse, double alpha_hat,
                                   bool require_resolved = true);

/// alpha_hat on short channels at the midpoints of the axis-aligned interior
/// coarse edges; 1 elsewhere. Crossing channels are 2h along the edge and
/// extend 2h to both sides, touching channels are 2h x 2h blocks on one side.
CoefficientField channel_field(const FineMesh& mesh, const CoarseMesh& coarse, double alpha_hat,
                               ChannelLayout layout, bool require_resolved = true);

/// Spherical covariance model; zero beyond the range.
double spherical_covariance(double r, double theta, double sigma2);

/// Zero-mean Gaussian sample on the grid_size^2 pixel grid (row-major, y
/// outer) by circulant embedding on the 2x padded torus.
std::vector<double> sample_gaussian_field(const GrfSpec& spec);

/// exp of the Gaussian sample, looked up at each triangle's barycenter.
CoefficientField lognormal_field(const FineMesh& mesh, const GrfSpec& spec);

/// Same realization with the variance chosen so that max/min equals
/// `target_contrast`. The variance used is written to `sigma2_out`.
CoefficientField lognormal_field_with_contrast(const FineMesh& mesh, GrfSpec spec,
                                               double target_contrast, double* sigma2_out = nullptr);

CoefficientField scaled(const CoefficientField& field, double factor);

/// MDGS-ALPHA v1 text format.
void write_field(std::ostream& os, const CoefficientField& field);
CoefficientField read_field(std::istream& is);
CoefficientField read_field_file(const std::string& path);

}  // namespace mdgs
