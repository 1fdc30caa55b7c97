#include "aeex/conformal.hpp"

#include <cmath>

#include "aeex/error.hpp"

namespace aeex {

void validate_shape(const ObstacleShape& shape) {
  if (const auto* d = std::get_if<Disk>(&shape)) {
    if (!(d->radius > 0.0) || !std::isfinite(d->radius))
      throw ValidationError("disk radius must be positive");
  } else {
    const auto& e = std::get<Ellipse>(shape);
    if (!(e.semi_minor > 0.0) || !std::isfinite(e.semi_major))
      throw ValidationError("ellipse semi-axes must be positive");
    if (e.semi_minor > e.semi_major)
      throw ValidationError("ellipse requires semi_major >= semi_minor");
  }
}

ConformalMap::ConformalMap(const ObstacleShape& shape) : shape_(shape) {
  validate_shape(shape);
  if (const auto* d = std::get_if<Disk>(&shape)) {
    a_ = b_ = d->radius;
  } else {
    const auto& e = std::get<Ellipse>(shape);
    a_ = e.semi_major;
    b_ = e.semi_minor;
  }
  c2_ = (a_ - b_) * (a_ + b_);
}

cplx ConformalMap::w_of_z(cplx z) const {
  if (c2_ == 0.0) return z / a_;
  // z * sqrt(1 - c^2/z^2) keeps the cut on the focal segment, inside the obstacle
  const cplx root = z * std::sqrt(1.0 - c2_ / (z * z));
  return (z + root) / (a_ + b_);
}

cplx ConformalMap::z_of_w(cplx w) const {
  if (c2_ == 0.0) return a_ * w;
  return 0.5 * ((a_ + b_) * w + (a_ - b_) / w);
}

cplx ConformalMap::dz_dw(cplx w) const {
  if (c2_ == 0.0) return {a_, 0.0};
  return 0.5 * ((a_ + b_) - (a_ - b_) / (w * w));
}

cplx ConformalMap::d2z_dw2(cplx w) const {
  if (c2_ == 0.0) return {0.0, 0.0};
  return (a_ - b_) / (w * w * w);
}

cplx ConformalMap::dw_dz(cplx z) const { return 1.0 / dz_dw(w_of_z(z)); }

cplx ConformalMap::d2w_dz2(cplx z) const {
  const cplx w = w_of_z(z);
  const cplx d1 = 1.0 / dz_dw(w);
  return -d2z_dw2(w) * d1 * d1 * d1;
}

Mat2 ConformalMap::jacobian(Vec2 x) const {
  const cplx f = dw_dz(to_complex(x));
  const double A = f.real(), B = f.imag();
  return {{{A, -B}, {B, A}}};
}

Tensor2x2x2 ConformalMap::second_derivative(Vec2 x) const {
  const cplx f = d2w_dz2(to_complex(x));
  const double C = f.real(), D = f.imag();
  Tensor2x2x2 t{};
  t[0] = {{{C, -D}, {-D, -C}}};
  t[1] = {{{D, C}, {C, -D}}};
  return t;
}

cplx ConformalMap::z_of_zeta(double s, double theta) const {
  return z_of_w(std::polar(std::exp(s), theta));
}

cplx ConformalMap::dz_dzeta(double s, double theta) const {
  const cplx w = std::polar(std::exp(s), theta);
  return w * dz_dw(w);
}

cplx ConformalMap::d2z_dzeta2(double s, double theta) const {
  const cplx w = std::polar(std::exp(s), theta);
  return w * dz_dw(w) + w * w * d2z_dw2(w);
}

double ConformalMap::conformal_factor(double s, double theta) const {
  return std::norm(dz_dzeta(s, theta));
}

ConformalMap build_map(const ObstacleShape& shape) { return ConformalMap(shape); }

Vec2 star(Vec2 eta) {
  const double r2 = norm2(eta);
  if (r2 == 0.0) throw DomainError("star is undefined at the origin");
  return {eta.x / r2, eta.y / r2};
}

}  // namespace aeex
