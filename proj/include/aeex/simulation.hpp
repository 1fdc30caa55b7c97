#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aeex/initial.hpp"
#include "aeex/transport.hpp"

namespace aeex {

struct SimConfig {
  ObstacleShape shape = Disk{1.0};
  double alpha = 0.2;
  std::size_t n_r = 128;
  std::size_t n_theta = 256;
  double r_max = 16.0;
  double dt = 1e-3;
  double t_end = 1.0;
  InitialCondition initial = VortexPair{};
  double picard_tol = 1e-10;  // on the relative H1 change of the velocity
  int picard_max_iter = 50;
  int diagnostics_every = 10;
  int max_halvings = 4;
  int snapshot_every = 0;  // 0 disables snapshots
  AdvectOptions advect{};

  void validate() const;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;
  double q_l1 = 0.0;
  double q_l2 = 0.0;
  double q_linf = 0.0;
  double circulation = 0.0;
  double support_radius = 0.0;
  int picard_iters = 0;
  double picard_residual = 0.0;
  // not written to the CSV
  double q_min = 0.0;
  double q_max = 0.0;
  double max_speed = 0.0;
  double speed_integral = 0.0;  // int_0^t max|u| dt
  std::size_t step = 0;
};

inline constexpr const char* diagnostics_header =
    "t,energy,q_l1,q_l2,q_linf,circulation,support_radius,picard_iters,picard_residual";

/// One CSV row, 17 significant digits.
std::string format_record(const DiagnosticsRecord& r);

struct SimState {
  double t = 0.0;
  ScalarField q;
  VelocityField u;
  /// Velocity at the previous time level, used to extrapolate the Picard guess.
  VelocityField u_prev;
  double dt_prev = 0.0;
  /// Support threshold, fixed at 1e-10 max|q| of the initial data.
  double support_threshold = 0.0;
  std::vector<DiagnosticsRecord> history;
};

struct StepReport {
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residuals;  // relative H1 change per iteration
  AdvectStats advect;
};

/// Time integrator built on the fixed-point map
/// F[u] = filter_solve(advect(q0, u)).
class Simulation {
 public:
  explicit Simulation(SimConfig config);

  const SimConfig& config() const { return config_; }
  const GridPtr& grid() const { return grid_; }
  const FilterSolver& filter() const { return filter_; }

  SimState initial_state() const;
  SimState state_from(ScalarField q, double t = 0.0) const;

  /// Transport q0 over dt by the frozen field u_in, then filter.
  VelocityField picard_map(const VelocityField& u_in, const ScalarField& q0, double dt) const;
  /// Transport with the velocity varying linearly from u_start to u_in across
  /// the step. The transported q is returned through q_out.
  VelocityField picard_map(const VelocityField& u_start, const VelocityField& u_in,
                           const ScalarField& q0, double dt, ScalarField* q_out = nullptr) const;

  /// Iterates the map to picard_tol and commits the fixed point. Throws
  /// NumericError with code PICARD if it does not converge.
  SimState step(const SimState& state, double dt, StepReport* report = nullptr) const;

  /// Relative H1 changes |u^{k+1} - u^k| / |u^{k+1}| of the iteration started
  /// from the current velocity, for `iterations` evaluations of the map.
  std::vector<double> picard_differences(const SimState& state, double dt,
                                         int iterations) const;

  DiagnosticsRecord diagnose(const SimState& state) const;

 private:
  SimConfig config_;
  GridPtr grid_;
  FilterSolver filter_;
};

/// Largest ratio of successive differences that sit above the noise floor
/// `floor` (relative). Returns 0 when fewer than two differences qualify.
double contraction_ratio(const std::vector<double>& differences, double floor = 1e-12);

struct RunOptions {
  std::string output_dir;  // empty: no files written
  /// Called after the initial state and after every accepted step.
  std::function<void(const SimState&, const StepReport&)> observer;
};

struct RunResult {
  SimState state;
  std::vector<StepReport> steps;
  int halvings = 0;  // total number of halved steps
};

/// Integrates to t_end. Failed steps are retried as two half steps, up to
/// max_halvings levels deep.
RunResult run(const SimConfig& config, const RunOptions& opt = {});

void write_diagnostics(const std::string& path, const std::vector<DiagnosticsRecord>& rows);

/// Compactly supported approximation perp-grad(chi_n (phi - a_n)), where chi_n
/// is a smooth cutoff in the mapped radius (1 below n, 0 above 2n) and a_n is
/// the mean of phi over the annulus n < |T| < 2n.
VelocityField approximate_initial(const ScalarField& stream, double n, double alpha);

/// Smooth step: 1 for x <= 0, 0 for x >= 1, C-infinity in between.
double smooth_cutoff(double x);

}  // namespace aeex
