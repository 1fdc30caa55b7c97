#pragma once

#include <variant>

#include "aeex/grid.hpp"

namespace aeex {

struct ZeroVorticity {};

/// q = circulation / (2 pi w^2) exp(-|x - c|^2 / (2 w^2)).
struct GaussianVortex {
  Vec2 center{2.0, 0.0};
  double width = 0.3;
  double circulation = 1.0;
};

/// Radially symmetric ring about the origin, q = amplitude exp(-(|x| - R)^2 / (2 w^2)).
struct GaussianRing {
  double radius = 2.5;
  double width = 0.3;
  double amplitude = 1.0;
};

/// Counter-rotating pair: +circulation at center + (0, d/2), -circulation at
/// center - (0, d/2).
struct VortexPair {
  Vec2 center{3.0, 0.0};
  double separation = 2.0;
  double width = 0.5;
  double circulation = 1.0;
};

using InitialCondition = std::variant<ZeroVorticity, GaussianVortex, GaussianRing, VortexPair>;

void validate(const InitialCondition& ic);
double initial_vorticity(const InitialCondition& ic, Vec2 x);
ScalarField make_vorticity(const GridPtr& grid, const InitialCondition& ic);

}  // namespace aeex
