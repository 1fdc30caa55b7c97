#pragma once

#include <vector>

#include "aeex/conformal.hpp"

namespace aeex {

/// Point vortices (blob_radius == 0) or log-mollified blobs.
/// blob_radius is measured in mapped coordinates.
struct VortexBlobSet {
  std::vector<Vec2> positions;
  std::vector<double> strengths;
  double blob_radius = 0.0;

  /// Throws ValidationError on size mismatch or a position not strictly in the fluid.
  void validate(const ConformalMap& map) const;
};

/// Exterior Green's function with Dirichlet data on the obstacle boundary.
/// Throws SingularityError for |x - y| < 1e-14, DomainError inside the obstacle.
double green_eval(const ConformalMap& map, Vec2 x, Vec2 y);

/// Gradient of green_eval in x.
Vec2 green_grad_x(const ConformalMap& map, Vec2 x, Vec2 y);

/// psi(t) = sum_i Gamma_i G_eps(t, x_i).
std::vector<double> stream_from_blobs(const ConformalMap& map, const VortexBlobSet& blobs,
                                      const std::vector<Vec2>& targets);

/// Unfiltered velocity perp-grad psi = (-d2 psi, d1 psi) from the blob sum.
std::vector<Vec2> velocity_from_blobs(const ConformalMap& map, const VortexBlobSet& blobs,
                                      const std::vector<Vec2>& targets);

}  // namespace aeex
