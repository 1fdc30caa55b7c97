#include <cmath>
#include <numbers>
#include <random>

#include "aeex/error.hpp"
#include "aeex/greens.hpp"
#include "doctest.h"

using namespace aeex;

namespace {
constexpr double kPi = std::numbers::pi;

Vec2 random_fluid_point(const ConformalMap& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ur(1.05, 6.0), ut(0.0, 2.0 * kPi);
  const double r = ur(rng), t = ut(rng);
  return m.inverse({r * std::cos(t), r * std::sin(t)});
}
}  // namespace

TEST_CASE("hand values on the unit disk") {
  const ConformalMap m(Disk{1.0});
  // |2-3| = 1, |2 - 1/3| * 3 = 5
  CHECK(green_eval(m, {2, 0}, {3, 0}) == doctest::Approx(std::log(0.2) / (2 * kPi)).epsilon(1e-14));
  CHECK(std::abs(green_eval(m, {1, 0}, {3, 0})) < 1e-15);
  const double a = green_eval(m, {2, 0}, {0, 3});
  const double b = green_eval(m, {0, 3}, {2, 0});
  CHECK(a == doctest::Approx(std::log(13.0 / 37.0) / (4 * kPi)).epsilon(1e-14));
  CHECK(std::abs(a - b) < 1e-15);
}

TEST_CASE("errors") {
  const ConformalMap m(Disk{1.0});
  CHECK_THROWS_AS(green_eval(m, {2, 0}, {2, 0}), SingularityError);
  CHECK_THROWS_AS(green_eval(m, {0.5, 0}, {2, 0}), DomainError);
  CHECK_THROWS_AS(green_grad_x(m, {2, 0}, {2, 0}), SingularityError);
  VortexBlobSet b{{{2, 0}}, {1.0}, 0.0};
  CHECK_THROWS_AS(stream_from_blobs(m, b, {{2, 0}}), SingularityError);
  VortexBlobSet bad{{{0.5, 0}}, {1.0}, 0.0};
  CHECK_THROWS_AS(bad.validate(m), ValidationError);
  VortexBlobSet mism{{{2, 0}}, {1.0, 2.0}, 0.0};
  CHECK_THROWS_AS(mism.validate(m), ValidationError);
}

TEST_CASE("symmetry and boundary vanishing") {
  for (const ObstacleShape& sh : {ObstacleShape{Disk{1.0}}, ObstacleShape{Ellipse{2.0, 1.0}}}) {
    const ConformalMap m(sh);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 500; ++k) {
      const Vec2 x = random_fluid_point(m, rng), y = random_fluid_point(m, rng);
      CHECK(std::abs(green_eval(m, x, y) - green_eval(m, y, x)) < 1e-12);
    }
    const Vec2 y = random_fluid_point(m, rng);
    for (int k = 0; k < 64; ++k) {
      const double t = 2 * kPi * k / 64;
      const Vec2 xb = m.inverse({std::cos(t), std::sin(t)});
      CHECK(std::abs(green_eval(m, xb, y)) < 1e-10);
    }
  }
}

TEST_CASE("gradient agrees with central differences") {
  for (const ObstacleShape& sh : {ObstacleShape{Disk{1.0}}, ObstacleShape{Ellipse{2.0, 1.0}}}) {
    const ConformalMap m(sh);
    std::mt19937_64 rng(5);
    const double h = 1e-5;
    for (int k = 0; k < 50; ++k) {
      const Vec2 x = random_fluid_point(m, rng), y = random_fluid_point(m, rng);
      if (norm2(x - y) < 0.25) continue;
      const Vec2 g = green_grad_x(m, x, y);
      const double gx = (green_eval(m, {x.x + h, x.y}, y) - green_eval(m, {x.x - h, x.y}, y)) / (2 * h);
      const double gy = (green_eval(m, {x.x, x.y + h}, y) - green_eval(m, {x.x, x.y - h}, y)) / (2 * h);
      const double scale = std::sqrt(norm2(g));
      CHECK(std::hypot(g.x - gx, g.y - gy) / scale < 1e-6);
    }
  }
  const ConformalMap d(Disk{1.0});
  const Vec2 g = green_grad_x(d, {2, 0}, {3, 0});
  const double h = 1e-5;
  const double gx = (green_eval(d, {2 + h, 0}, {3, 0}) - green_eval(d, {2 - h, 0}, {3, 0})) / (2 * h);
  CHECK(std::abs(g.x - gx) < 1e-7);
  CHECK(std::abs(g.y) < 1e-12);
}

TEST_CASE("gradient far-field decay") {
  const ConformalMap m(Ellipse{2.0, 1.0});
  const Vec2 y{2.6, 0.4};
  const double g50 = std::sqrt(norm2(green_grad_x(m, {50, 10}, y)));
  const double g100 = std::sqrt(norm2(green_grad_x(m, {100, 20}, y)));
  const double g200 = std::sqrt(norm2(green_grad_x(m, {200, 40}, y)));
  CHECK(g50 / g100 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(g100 / g200 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("harmonic away from the source") {
  const ConformalMap m(Ellipse{2.0, 1.0});
  const Vec2 y{0.5, 2.0}, x{3.0, 0.8};
  double prev = 0.0;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    const double lap = (green_eval(m, {x.x + h, x.y}, y) + green_eval(m, {x.x - h, x.y}, y) +
                        green_eval(m, {x.x, x.y + h}, y) + green_eval(m, {x.x, x.y - h}, y) -
                        4 * green_eval(m, x, y)) /
                       (h * h);
    if (prev != 0.0) CHECK(std::log2(std::abs(prev / lap)) > 1.8);
    prev = lap;
  }
}

TEST_CASE("blob sums") {
  const ConformalMap m(Disk{1.0});
  VortexBlobSet empty;
  const auto z = stream_from_blobs(m, empty, {{2, 0}, {0, 3}});
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);

  VortexBlobSet one{{{2, 0}}, {2 * kPi}, 0.0};
  CHECK(stream_from_blobs(m, one, {{3, 0}})[0] == doctest::Approx(-std::log(5.0)).epsilon(1e-14));

  VortexBlobSet a{{{2, 0}}, {1.3}, 0.0}, b{{{0, -2.5}}, {-0.4}, 0.0};
  VortexBlobSet ab{{{2, 0}, {0, -2.5}}, {1.3, -0.4}, 0.0};
  const std::vector<Vec2> t{{1.5, 1.5}, {-3, 0.2}};
  const auto pa = stream_from_blobs(m, a, t), pb = stream_from_blobs(m, b, t),
             pab = stream_from_blobs(m, ab, t);
  for (int k = 0; k < 2; ++k) CHECK(pab[k] == doctest::Approx(pa[k] + pb[k]).epsilon(1e-14));

  VortexBlobSet zero{{{2, 0}, {3, 1}}, {0.0, 0.0}, 0.1};
  for (const auto& v : velocity_from_blobs(m, zero, t)) {
    CHECK(v.x == 0.0);
    CHECK(v.y == 0.0);
  }
}

TEST_CASE("velocity is tangent on the boundary") {
  const ConformalMap m(Disk{1.0});
  VortexBlobSet one{{{2, 0}}, {1.0}, 0.0};
  std::vector<Vec2> bd;
  for (int k = 0; k < 64; ++k) {
    const double t = 2 * kPi * k / 64;
    bd.push_back({std::cos(t), std::sin(t)});
  }
  const auto u = velocity_from_blobs(m, one, bd);
  for (int k = 0; k < 64; ++k) CHECK(std::abs(dot(u[k], bd[k])) < 1e-10);

  const ConformalMap e(Ellipse{2.0, 1.0});
  VortexBlobSet two{{{2.5, 0.5}}, {1.0}, 0.0};
  for (int k = 0; k < 64; ++k) {
    const double t = 2 * kPi * k / 64;
    const Vec2 x{2 * std::cos(t), std::sin(t)};
    const Vec2 n{std::cos(t) / 2, std::sin(t)};  // gradient of x^2/4 + y^2
    const Vec2 v = velocity_from_blobs(e, two, {x})[0];
    CHECK(std::abs(dot(v, n)) / std::sqrt(norm2(n)) < 1e-10);
  }
}

TEST_CASE("symmetric pair gives axis-parallel velocity on the axis") {
  const ConformalMap m(Disk{1.0});
  VortexBlobSet pair{{{3, 1}, {3, -1}}, {1.0, -1.0}, 0.0};
  const auto u = velocity_from_blobs(m, pair, {{1.5, 0}, {4, 0}, {-2, 0}, {7, 0}});
  for (const auto& v : u) {
    CHECK(std::abs(v.y) < 1e-14);
    CHECK(std::abs(v.x) > 1e-4);
  }
}
