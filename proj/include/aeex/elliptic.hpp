#pragma once

#include <memory>
#include <vector>

#include "aeex/grid.hpp"

namespace aeex {

/// Velocity u = perp-grad(phi) held through its stream function on the grid.
///
/// Stores the nodal mapped derivatives of phi and the mapped velocity
/// (ds/dt, dtheta/dt) = (-phi_theta, phi_s) / H used for characteristics.
class VelocityField {
 public:
  VelocityField() = default;

  /// `vorticity` is the physical Laplacian of `stream`.
  static VelocityField from_stream(ScalarField stream, ScalarField vorticity, double alpha);
  /// Vorticity computed by finite differences.
  static VelocityField from_stream(ScalarField stream, double alpha);
  static VelocityField zero(GridPtr grid, double alpha);

  const GridPtr& grid() const { return stream_.grid(); }
  const ScalarField& stream() const { return stream_; }
  const ScalarField& vorticity() const { return vorticity_; }
  double alpha() const { return alpha_; }

  const std::vector<double>& stream_s() const { return phi_s_; }
  const std::vector<double>& stream_theta() const { return phi_t_; }
  const std::vector<double>& mapped_s() const { return vs_; }
  const std::vector<double>& mapped_theta() const { return vt_; }

  /// Physical velocity at node (i, j).
  Vec2 node_velocity(std::size_t i, std::size_t j) const;
  double max_speed() const;
  bool is_zero() const;

 private:
  ScalarField stream_, vorticity_;
  double alpha_ = 0.0;
  std::vector<double> phi_s_, phi_t_, vs_, vt_;
};

/// Bicubic interpolation of perp-grad(phi), chain-ruled through the map.
/// Points on the obstacle boundary return exactly zero; points inside the
/// obstacle raise DomainError and points beyond r_max ExtrapolationError.
std::vector<Vec2> evaluate_velocity(const VelocityField& field, const std::vector<Vec2>& points);

/// Delta psi = q, psi = 0 on the boundary, psi tends to a constant at infinity
/// (the behaviour of the exterior Green's representation).
class PoissonSolver {
 public:
  explicit PoissonSolver(GridPtr grid);
  ~PoissonSolver();
  PoissonSolver(PoissonSolver&&) noexcept;
  PoissonSolver& operator=(PoissonSolver&&) noexcept;

  ScalarField solve(const ScalarField& q) const;
  const GridPtr& grid() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ScalarField poisson_solve(const GridPtr& grid, const ScalarField& q);

/// (I - alpha^2 Delta) Delta phi = q with phi = d_n phi = 0 on the boundary.
/// Split as omega - alpha^2 Delta omega = q, Delta phi = omega, with the
/// boundary values of omega fixed by an influence matrix.
class FilterSolver {
 public:
  /// `coupled` forces the iterative mode-coupled path even for radial
  /// factors (used to cross-check the two paths).
  FilterSolver(GridPtr grid, double alpha, bool coupled = false);
  ~FilterSolver();
  FilterSolver(FilterSolver&&) noexcept;
  FilterSolver& operator=(FilterSolver&&) noexcept;

  VelocityField solve(const ScalarField& q) const;
  const GridPtr& grid() const;
  double alpha() const;
  /// Condition estimate of the influence matrix (ratio of extreme pivots).
  double influence_condition() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

VelocityField filter_solve(const GridPtr& grid, const ScalarField& q, double alpha);

/// Max-norm residual of the discrete Poisson rows, relative to the source.
double poisson_residual(const ScalarField& q, const ScalarField& psi);

struct FilterResiduals {
  double helmholtz = 0.0;  // omega - alpha^2 Delta omega = q rows
  double poisson = 0.0;    // Delta phi = omega rows
  double wall_flux = 0.0;  // |d phi / dn| on the boundary
};

FilterResiduals filter_residuals(const ScalarField& q, const VelocityField& u);

/// Far-field Dirichlet-to-Neumann coefficient of the screened mode equation
/// f_ss = (k^2 + x^2 e^{2(s-S)}) f: returns beta with f_s + beta f = 0,
/// beta = x K_{k-1}(x) / K_k(x) + k.
double screened_dtn(int k, double x);

/// Quantities shared by the energy and Picard residual norms.
double h1_seminorm_sq(const std::vector<double>& phi_s, const std::vector<double>& phi_theta,
                      const MappedGrid& g);
/// sqrt( int |grad phi|^2 + omega^2 ) of u = perp-grad(phi).
double velocity_h1_norm(const VelocityField& u);
/// Same norm of the difference a - b.
double velocity_h1_distance(const VelocityField& a, const VelocityField& b);
/// int_{|T| > r_max} |grad phi|^2 for the decaying harmonic continuation of
/// the outer ring of `stream`.
double exterior_dirichlet_energy(const ScalarField& stream);
/// 1/2 int |u|^2 + alpha^2 |grad u|^2 over the whole exterior domain: the grid
/// integral plus the harmonic tail beyond r_max (omega is screened to zero
/// there).
double kinetic_energy(const VelocityField& u);

}  // namespace aeex
