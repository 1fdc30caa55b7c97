#pragma once

#include <array>
#include <complex>
#include <variant>

namespace aeex {

using cplx = std::complex<double>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline cplx to_complex(Vec2 a) { return {a.x, a.y}; }
inline Vec2 to_vec(cplx z) { return {z.real(), z.imag()}; }

/// Row-major 2x2: m[i][j] = d(out_i)/d(in_j).
using Mat2 = std::array<std::array<double, 2>, 2>;
/// t[k][i][j] = d^2 T_k / dx_i dx_j.
using Tensor2x2x2 = std::array<Mat2, 2>;

struct Disk {
  double radius = 1.0;
};

/// Semi-axes along x (semi_major) and y (semi_minor).
struct Ellipse {
  double semi_major = 2.0;
  double semi_minor = 1.0;
};

using ObstacleShape = std::variant<Disk, Ellipse>;

/// Throws ValidationError for non-positive sizes or semi_minor > semi_major.
void validate_shape(const ObstacleShape& shape);

/// Exterior map T from the fluid domain onto |w| > 1.
///
/// Both shapes are handled as a Joukowski pair
///   z = ((a+b) w + (a-b)/w) / 2,
/// with a = b for the disk. The forward direction picks the root with |w| >= 1.
class ConformalMap {
 public:
  explicit ConformalMap(const ObstacleShape& shape);

  const ObstacleShape& shape() const { return shape_; }
  bool is_disk() const { return c2_ == 0.0; }

  // complex forms
  cplx w_of_z(cplx z) const;
  cplx z_of_w(cplx w) const;
  cplx dz_dw(cplx w) const;
  cplx d2z_dw2(cplx w) const;
  cplx dw_dz(cplx z) const;
  cplx d2w_dz2(cplx z) const;

  // real forms
  Vec2 forward(Vec2 x) const { return to_vec(w_of_z(to_complex(x))); }
  Vec2 inverse(Vec2 eta) const { return to_vec(z_of_w(to_complex(eta))); }
  Mat2 jacobian(Vec2 x) const;
  Tensor2x2x2 second_derivative(Vec2 x) const;

  /// |T(x)|, the mapped radius.
  double mapped_radius(Vec2 x) const { return std::abs(w_of_z(to_complex(x))); }

  /// Log-polar coordinates zeta = s + i theta with w = exp(zeta).
  /// Returns z(zeta), dz/dzeta and d2z/dzeta2.
  cplx z_of_zeta(double s, double theta) const;
  cplx dz_dzeta(double s, double theta) const;
  cplx d2z_dzeta2(double s, double theta) const;
  /// |dz/dzeta|^2, the area factor of the log-polar coordinates.
  double conformal_factor(double s, double theta) const;

  /// Largest distance between two boundary points.
  double obstacle_diameter() const { return 2.0 * a_; }

 private:
  ObstacleShape shape_;
  double a_ = 1.0;   // semi-axis along x
  double b_ = 1.0;   // semi-axis along y
  double c2_ = 0.0;  // a^2 - b^2
};

ConformalMap build_map(const ObstacleShape& shape);

/// Reflection through the unit circle, eta / |eta|^2.
Vec2 star(Vec2 eta);

}  // namespace aeex
