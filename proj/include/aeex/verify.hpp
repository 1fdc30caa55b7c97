#pragma once

#include <vector>

#include "aeex/simulation.hpp"

namespace aeex {

/// One row of the elliptic scaling table for a vorticity supported in |x| <= R.
struct EstimateRow {
  double R = 0.0;
  double q_l1 = 0.0;
  double q_l2 = 0.0;
  double grad_norm = 0.0;  // |grad psi|_{L2}
  double hess_norm = 0.0;  // |D^2 psi|_{L2}
  double grad_ratio = 0.0;  // grad_norm / (R (|q|_2 + |q|_1))
  double hess_ratio = 0.0;  // hess_norm / (R |q|_2 + |q|_1)
  bool skipped = false;     // zero data: ratios undefined
};

/// Ring vorticity amplitude * exp(-(|x| - 0.75 R)^2 / (2 (R/30)^2)), which
/// falls below 1e-12 of its peak at |x| = R.
std::vector<EstimateRow> estimate_table(const ObstacleShape& shape, const std::vector<double>& radii,
                                        double amplitude = 1.0);
/// max/min of a ratio column over the rows that were not skipped (0 if none).
double ratio_spread(const std::vector<EstimateRow>& rows, bool hessian);

/// sqrt(int q^2 + |grad q|^2) on the grid.
double q_h1_norm(const ScalarField& q);
/// |D^2 psi|_{L2} from the grid derivatives of psi; lap holds Delta psi.
double stream_hessian_norm(const ScalarField& psi, const ScalarField& lap);

/// Rigid rotation u = (-y, x) of a Gaussian (center (2, 0), width 0.6) around
/// Disk{1}, r_max 8, on an n_r x n_theta grid with dt = t_end / steps.
struct RotationHistory {
  std::vector<double> t, l1, l2, linf, h1;
  double q_min0 = 0.0, q_max0 = 0.0;
  std::size_t bound_violations = 0;  // nodes outside [min q0, max q0], summed over steps
  ScalarField initial, final;
};
RotationHistory rotation_test(std::size_t n_r = 128, std::size_t n_theta = 256,
                              std::size_t steps = 100, double t_end = 1.0,
                              Limiter limiter = Limiter::cell);

struct EstimateReport {
  std::vector<EstimateRow> rows;
  double grad_spread = 0.0;
  double hess_spread = 0.0;
  std::vector<double> h1_ratio;  // |q(t)|_H1 / |q0|_H1 on the rotation test
  double h1_ratio_max = 0.0;
};

/// Scaling table over R in {2, 4, 8, 16} for the configured obstacle plus the
/// H1 ratio of the rotation test.
EstimateReport verify_estimates(const SimConfig& config);

/// Compactly supported bump chi(x) = exp(1 - 1/(1 - |x - c|^2 / a^2)).
struct Bump {
  Vec2 center;
  double radius = 1.0;
  double value(Vec2 x) const;
  Vec2 gradient(Vec2 x) const;
  double laplacian(Vec2 x) const;
};

/// Tracks the weak form of the evolution tested against perp-grad(chi):
///   L(t) = (grad phi, grad chi) + alpha^2 (Delta phi, Delta chi),
///   L(t) - L(0) + int_0^t (q, u . grad chi) = 0,
/// with the time integral by the trapezoid rule over observed times.
class WeakFormMonitor {
 public:
  WeakFormMonitor(GridPtr grid, std::vector<Bump> tests);
  void observe(double t, const ScalarField& q, const VelocityField& u);

  std::size_t size() const { return tests_.size(); }
  /// max over time of |L(t) - L(0) + int_0^t (q, u . grad chi)| per test.
  const std::vector<double>& residual() const { return residual_; }
  /// max over time of |L(t) - L(0)| per test.
  const std::vector<double>& scale() const { return scale_; }
  std::vector<double> relative_residual() const;

 private:
  GridPtr grid_;
  std::vector<Bump> tests_;
  std::vector<std::vector<double>> chi_s_, chi_t_, lap_h_;
  std::vector<double> l0_, flux_prev_, integral_, residual_, scale_;
  double t_prev_ = 0.0;
  bool started_ = false;
};

/// Five fixed bumps around the default vortex pair.
std::vector<Bump> default_weak_tests();

}  // namespace aeex
