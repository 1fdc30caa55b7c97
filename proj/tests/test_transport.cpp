#include <cmath>
#include <numbers>

#include "aeex/error.hpp"
#include "aeex/initial.hpp"
#include "aeex/transport.hpp"
#include "aeex/verify.hpp"
#include "doctest.h"

using namespace aeex;

namespace {

// u = Omega (-y, x) from phi = Omega |x|^2 / 2.
VelocityField rigid_rotation(const GridPtr& g, double omega) {
  ScalarField phi(g, QuantityTag::phi), w(g, QuantityTag::omega, 2.0 * omega);
  for (std::size_t i = 0; i < g->n_r(); ++i)
    for (std::size_t j = 0; j < g->n_theta(); ++j) phi.at(i, j) = 0.5 * omega * norm2(g->node(i, j));
  return VelocityField::from_stream(phi, w, 0.1);
}

Vec2 centroid(const ScalarField& q) {
  const MappedGrid& g = *q.grid();
  Vec2 c{};
  double m = 0.0;
  for (std::size_t i = 0; i < g.n_r(); ++i)
    for (std::size_t j = 0; j < g.n_theta(); ++j) {
      const double w = g.area_weight(i, j) * q.at(i, j);
      c = c + w * g.node(i, j);
      m += w;
    }
  return (1.0 / m) * c;
}

}  // namespace

TEST_CASE("zero velocity leaves q bit-identical") {
  const auto g = make_grid(build_map(Ellipse{2.0, 1.0}), 48, 64, 8.0);
  const ScalarField q = make_vorticity(g, GaussianVortex{{3.0, 1.0}, 0.4, 1.0});
  const VelocityField z = VelocityField::zero(g, 0.2);
  CHECK(advect(q, z, 0.1).values() == q.values());
  CHECK(advect(q, z, z, 0.1).values() == q.values());
}

TEST_CASE("characteristics of a rigid rotation") {
  const auto g = make_grid(build_map(Disk{1.0}), 64, 128, 8.0);
  const VelocityFn rot = [](Vec2 x) { return Vec2{-x.y, x.x}; };
  for (double r : {1.5, 3.0, 6.0}) {
    const double t = 0.7;
    const Vec2 x{r * std::cos(t), r * std::sin(t)};
    const Vec2 f = trace_characteristic(*g, rot, x, 0.1);
    CHECK(std::abs(f.x - r * std::cos(t - 0.1)) < 1e-10);
    CHECK(std::abs(f.y - r * std::sin(t - 0.1)) < 1e-10);
  }
  // the grid field version agrees to interpolation accuracy
  const VelocityField u = rigid_rotation(g, 1.0);
  const Vec2 f = trace_characteristic(u, {0.0, 2.0}, 0.1);
  CHECK(std::hypot(f.x - 2.0 * std::sin(0.1), f.y - 2.0 * std::cos(0.1)) < 1e-6);
}

TEST_CASE("backward then forward tracing returns to the start") {
  const auto g = make_grid(build_map(Disk{1.0}), 64, 128, 16.0);
  const VelocityField u = filter_solve(g, make_vorticity(g, VortexPair{}), 0.2);
  for (Vec2 x : {Vec2{2.5, 0.3}, Vec2{4.0, -1.0}, Vec2{1.2, 0.9}}) {
    const Vec2 back = trace_characteristic(u, x, 1e-2);
    const Vec2 again = trace_characteristic(u, back, -1e-2);
    CHECK(std::hypot(again.x - x.x, again.y - x.y) < 1e-9);
  }
}

TEST_CASE("Courant violations raise StepSizeError") {
  const auto g = make_grid(build_map(Disk{1.0}), 64, 128, 8.0);
  const VelocityField u = rigid_rotation(g, 1.0);
  const ScalarField q = make_vorticity(g, GaussianVortex{});
  AdvectStats st;
  advect(q, u, 0.01, {}, &st);
  CHECK(st.courant == doctest::Approx(0.01 / g->dtheta()).epsilon(1e-6));
  CHECK_THROWS_AS(advect(q, u, 1.0), StepSizeError);
  AdvectOptions loose;
  loose.cfl_limit = 100.0;
  CHECK_NOTHROW(advect(q, u, 1.0, loose));
}

TEST_CASE("support radius") {
  const auto g = make_grid(build_map(Disk{1.0}), 128, 256, 16.0);
  CHECK(support_radius(ScalarField(g, QuantityTag::q)).radius == 0.0);
  // exp(-d^2 / (2 w^2)) = 1e-10 at d = w sqrt(20 ln 10)
  const ScalarField q = make_vorticity(g, GaussianVortex{{2.0, 0.0}, 0.2, 1.0});
  const double expected = 2.0 + 0.2 * std::sqrt(20.0 * std::log(10.0));
  const double cell = expected * std::max(g->ds(), g->dtheta());
  CHECK(std::abs(support_radius(q).radius - expected) < cell);
}

TEST_CASE("rotation transport: bounds, norms and centroid") {
  const RotationHistory h = rotation_test(64, 128, 50, 1.0);
  CHECK(h.bound_violations == 0);
  for (std::size_t n = 1; n < h.t.size(); ++n) {
    CHECK(h.l2[n] <= h.l2[0] * 1.01);
    CHECK(h.linf[n] <= h.linf[0]);
  }
  const Vec2 c0 = centroid(h.initial), c1 = centroid(h.final);
  // two cell edges at the blob radius
  const MappedGrid& g = *h.initial.grid();
  const double two_h = 2.0 * std::hypot(c0.x, c0.y) * std::max(g.ds(), g.dtheta());
  const Vec2 rotated{c0.x * std::cos(1.0) - c0.y * std::sin(1.0), c0.x * std::sin(1.0) + c0.y * std::cos(1.0)};
  CHECK(std::hypot(c1.x - rotated.x, c1.y - rotated.y) < two_h);
  CHECK(std::hypot(c1.x, c1.y) == doctest::Approx(std::hypot(c0.x, c0.y)).epsilon(1e-3));
}
