#include "aeex/initial.hpp"

#include <cmath>
#include <numbers>

#include "aeex/error.hpp"

namespace aeex {

namespace {

double gaussian(Vec2 x, Vec2 c, double w, double circulation) {
  return circulation / (2.0 * std::numbers::pi * w * w) * std::exp(-norm2(x - c) / (2.0 * w * w));
}

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};

}  // namespace

void validate(const InitialCondition& ic) {
  std::visit(overloaded{
                 [](const ZeroVorticity&) {},
                 [](const GaussianVortex& g) {
                   if (!(g.width > 0.0)) throw ValidationError("gaussian width must be > 0");
                 },
                 [](const GaussianRing& r) {
                   if (!(r.width > 0.0) || !(r.radius > 0.0))
                     throw ValidationError("ring radius and width must be > 0");
                 },
                 [](const VortexPair& p) {
                   if (!(p.width > 0.0) || !(p.separation > 0.0))
                     throw ValidationError("pair separation and width must be > 0");
                 },
             },
             ic);
}

double initial_vorticity(const InitialCondition& ic, Vec2 x) {
  return std::visit(
      overloaded{
          [](const ZeroVorticity&) { return 0.0; },
          [&](const GaussianVortex& g) { return gaussian(x, g.center, g.width, g.circulation); },
          [&](const GaussianRing& r) {
            const double d = std::sqrt(norm2(x)) - r.radius;
            return r.amplitude * std::exp(-d * d / (2.0 * r.width * r.width));
          },
          [&](const VortexPair& p) {
            const Vec2 h{0.0, 0.5 * p.separation};
            return gaussian(x, p.center + h, p.width, p.circulation) -
                   gaussian(x, p.center - h, p.width, p.circulation);
          },
      },
      ic);
}

ScalarField make_vorticity(const GridPtr& grid, const InitialCondition& ic) {
  validate(ic);
  ScalarField q(grid, QuantityTag::q);
  for (std::size_t i = 0; i < grid->n_r(); ++i)
    for (std::size_t j = 0; j < grid->n_theta(); ++j)
      q.at(i, j) = initial_vorticity(ic, grid->node(i, j));
  return q;
}

}  // namespace aeex
