#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "aeex/conformal.hpp"

namespace aeex {

enum class QuantityTag : std::uint64_t { q = 0, psi = 1, phi = 2, omega = 3 };

/// Location in log-polar mapped coordinates, s = ln|T(x)|, theta = arg T(x).
struct MappedPoint {
  double s = 0.0;
  double theta = 0.0;
};

/// Structured grid on 1 <= |w| <= r_max in mapped coordinates.
///
/// Radial nodes are geometric, r_i = r_max^(i/(n_r-1)), so they are uniform in
/// s = ln r. Angular nodes are uniform and periodic. Node (i, j) is stored at
/// i * n_theta + j.
class MappedGrid {
 public:
  MappedGrid(const ConformalMap& map, std::size_t n_r, std::size_t n_theta, double r_max = 16.0);

  const ConformalMap& map() const { return map_; }
  std::size_t n_r() const { return n_r_; }
  std::size_t n_theta() const { return n_theta_; }
  std::size_t size() const { return n_r_ * n_theta_; }
  std::size_t modes() const { return n_theta_ / 2 + 1; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * n_theta_ + j; }

  double r_max() const { return r_max_; }
  double s_max() const { return s_max_; }
  double ds() const { return ds_; }
  double dtheta() const { return dtheta_; }
  double s(std::size_t i) const { return static_cast<double>(i) * ds_; }
  double r(std::size_t i) const;
  double theta(std::size_t j) const { return static_cast<double>(j) * dtheta_; }

  /// |dz/dzeta|^2 at each node.
  const std::vector<double>& factor() const { return H_; }
  double factor(std::size_t i, std::size_t j) const { return H_[index(i, j)]; }
  /// theta-average of the factor on each radial line.
  const std::vector<double>& factor_mean() const { return Hbar_; }
  /// True when the factor does not depend on theta (disk obstacles).
  bool factor_is_radial() const { return map_.is_disk(); }

  Vec2 node(std::size_t i, std::size_t j) const { return to_vec(z_[index(i, j)]); }
  const std::vector<cplx>& z() const { return z_; }
  const std::vector<cplx>& dz() const { return dz_; }
  const std::vector<cplx>& d2z() const { return d2z_; }

  /// Radial quadrature weights (end-corrected trapezoid, includes ds).
  const std::vector<double>& s_weights() const { return ws_; }
  /// Physical area element for node quadrature: ws_i * dtheta * H_ij.
  double area_weight(std::size_t i, std::size_t j) const {
    return ws_[i] * dtheta_ * H_[index(i, j)];
  }

  /// Mapped coordinates of a physical point. Throws DomainError inside the
  /// obstacle and ExtrapolationError beyond r_max.
  MappedPoint locate(Vec2 x) const;

  /// Smallest physical cell edge over the grid.
  double min_cell_size() const;

 private:
  ConformalMap map_;
  std::size_t n_r_, n_theta_;
  double r_max_, s_max_, ds_, dtheta_;
  std::vector<double> H_, Hbar_, ws_;
  std::vector<cplx> z_, dz_, d2z_;
};

using GridPtr = std::shared_ptr<const MappedGrid>;

GridPtr make_grid(const ConformalMap& map, std::size_t n_r, std::size_t n_theta,
                  double r_max = 16.0);

class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(GridPtr grid, QuantityTag tag, double fill = 0.0);
  ScalarField(GridPtr grid, QuantityTag tag, std::vector<double> values);

  const GridPtr& grid() const { return grid_; }
  QuantityTag tag() const { return tag_; }
  void set_tag(QuantityTag t) { tag_ = t; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double& at(std::size_t i, std::size_t j) { return values_[grid_->index(i, j)]; }
  double at(std::size_t i, std::size_t j) const { return values_[grid_->index(i, j)]; }

  /// Bicubic interpolation in mapped coordinates.
  double sample(Vec2 x) const;
  double sample_mapped(MappedPoint p) const;

  double max_abs() const;

 private:
  GridPtr grid_;
  QuantityTag tag_ = QuantityTag::q;
  std::vector<double> values_;
};

/// Tensor 4x4 Lagrange stencil. Radial stencils shift inward at the ends;
/// angular stencils wrap.
struct Stencil {
  std::size_t cell_i = 0;  // lower corner of the containing cell
  std::size_t cell_j = 0;
  std::size_t i0 = 0;
  std::array<std::size_t, 4> j{};
  std::array<double, 4> ws{};
  std::array<double, 4> wt{};
};

Stencil make_stencil(const MappedGrid& g, double s, double theta);
double interpolate(const Stencil& st, const double* values, std::size_t n_theta);
/// Interpolation clipped to the range of the four corners of the containing cell.
double interpolate_clipped(const Stencil& st, const double* values, std::size_t n_theta);

/// Integral over the truncated fluid domain.
double integrate(const ScalarField& f);
/// Discrete L^p norm; p <= 0 selects the max norm.
double lp_norm(const ScalarField& f, double p);

/// Spectral d/dtheta of each radial line.
std::vector<double> d_theta(const MappedGrid& g, const std::vector<double>& f);
/// Spectral d2/dtheta2.
std::vector<double> d_theta2(const MappedGrid& g, const std::vector<double>& f);
/// Fourth-order finite-difference d/ds (one-sided near the ends).
std::vector<double> d_s(const MappedGrid& g, const std::vector<double>& f);
/// Fourth-order finite-difference d2/ds2.
std::vector<double> d_s2(const MappedGrid& g, const std::vector<double>& f);

}  // namespace aeex
