#include "aeex/greens.hpp"

#include <cmath>
#include <numbers>

#include "aeex/error.hpp"

namespace aeex {

namespace {

constexpr double kSingular = 1e-14;
constexpr double kInv4Pi = 0.25 / std::numbers::pi;

Vec2 mapped_point(const ConformalMap& map, Vec2 x) {
  const Vec2 eta = map.forward(x);
  if (norm2(eta) < 1.0 - 1e-12) throw DomainError("point lies inside the obstacle");
  return eta;
}

void check_distinct(Vec2 x, Vec2 y) {
  if (std::sqrt(norm2(x - y)) < kSingular)
    throw SingularityError("Green's function evaluated at coincident points");
}

// |eta - xi*|^2 |xi|^2, written symmetrically in (eta, xi)
double image_factor(Vec2 eta, Vec2 xi) {
  return norm2(eta) * norm2(xi) - 2.0 * dot(eta, xi) + 1.0;
}

double kernel(Vec2 eta, Vec2 xi, double eps2) {
  return kInv4Pi * (std::log(norm2(eta - xi) + eps2) - std::log(image_factor(eta, xi)));
}

// gradient in eta of kernel()
Vec2 kernel_grad(Vec2 eta, Vec2 xi, double eps2) {
  const Vec2 d = eta - xi;
  const Vec2 e = eta - star(xi);
  const double fd = 1.0 / (norm2(d) + eps2);
  const double fe = 1.0 / norm2(e);
  return 2.0 * kInv4Pi * Vec2{d.x * fd - e.x * fe, d.y * fd - e.y * fe};
}

Vec2 pull_back(const Mat2& J, Vec2 g) {
  return {J[0][0] * g.x + J[1][0] * g.y, J[0][1] * g.x + J[1][1] * g.y};
}

}  // namespace

void VortexBlobSet::validate(const ConformalMap& map) const {
  if (positions.size() != strengths.size())
    throw ValidationError("blob positions and strengths differ in length");
  if (!(blob_radius >= 0.0)) throw ValidationError("blob radius must be non-negative");
  for (const auto& p : positions)
    if (!(map.mapped_radius(p) > 1.0 + 1e-9))
      throw ValidationError("blob position not strictly inside the fluid domain");
}

double green_eval(const ConformalMap& map, Vec2 x, Vec2 y) {
  check_distinct(x, y);
  return kernel(mapped_point(map, x), mapped_point(map, y), 0.0);
}

Vec2 green_grad_x(const ConformalMap& map, Vec2 x, Vec2 y) {
  check_distinct(x, y);
  const Vec2 g = kernel_grad(mapped_point(map, x), mapped_point(map, y), 0.0);
  return pull_back(map.jacobian(x), g);
}

std::vector<double> stream_from_blobs(const ConformalMap& map, const VortexBlobSet& blobs,
                                      const std::vector<Vec2>& targets) {
  blobs.validate(map);
  const std::size_t nb = blobs.positions.size();
  std::vector<Vec2> xi(nb);
  for (std::size_t i = 0; i < nb; ++i) xi[i] = map.forward(blobs.positions[i]);
  const double eps2 = blobs.blob_radius * blobs.blob_radius;

  std::vector<double> out(targets.size(), 0.0);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Vec2 eta = mapped_point(map, targets[t]);
    double acc = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
      if (eps2 == 0.0) check_distinct(targets[t], blobs.positions[i]);
      acc += blobs.strengths[i] * kernel(eta, xi[i], eps2);
    }
    out[t] = acc;
  }
  return out;
}

std::vector<Vec2> velocity_from_blobs(const ConformalMap& map, const VortexBlobSet& blobs,
                                      const std::vector<Vec2>& targets) {
  blobs.validate(map);
  const std::size_t nb = blobs.positions.size();
  std::vector<Vec2> xi(nb);
  for (std::size_t i = 0; i < nb; ++i) xi[i] = map.forward(blobs.positions[i]);
  const double eps2 = blobs.blob_radius * blobs.blob_radius;

  std::vector<Vec2> out(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Vec2 eta = mapped_point(map, targets[t]);
    Vec2 g{};
    for (std::size_t i = 0; i < nb; ++i) {
      if (eps2 == 0.0) check_distinct(targets[t], blobs.positions[i]);
      g = g + blobs.strengths[i] * kernel_grad(eta, xi[i], eps2);
    }
    const Vec2 grad = pull_back(map.jacobian(targets[t]), g);
    out[t] = {-grad.y, grad.x};
  }
  return out;
}

}  // namespace aeex
