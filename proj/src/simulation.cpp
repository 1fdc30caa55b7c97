#include "aeex/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "aeex/error.hpp"
#include "aeex/snapshot.hpp"

namespace aeex {

namespace {

// a + c (a - b) on stream and vorticity
VelocityField extrapolate(const VelocityField& a, const VelocityField& b, double c) {
  auto lin = [c](const ScalarField& fa, const ScalarField& fb) {
    std::vector<double> v(fa.values());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += c * (v[k] - fb.values()[k]);
    return ScalarField(fa.grid(), fa.tag(), std::move(v));
  };
  return VelocityField::from_stream(lin(a.stream(), b.stream()),
                                    lin(a.vorticity(), b.vorticity()), a.alpha());
}

bool retryable(const Error& e) { return e.code() == "STEP_SIZE" || e.code() == "PICARD"; }

}  // namespace

void SimConfig::validate() const {
  validate_shape(shape);
  if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0", "CONFIG_INVALID");
  if (n_r < 8 || n_theta < 8 || n_theta % 2 != 0)
    throw ValidationError("grid needs n_r >= 8 and even n_theta >= 8", "CONFIG_INVALID");
  if (!(r_max > 1.0)) throw ValidationError("r_max must be > 1", "CONFIG_INVALID");
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0", "CONFIG_INVALID");
  if (!(t_end >= 0.0)) throw ValidationError("t_end must be >= 0", "CONFIG_INVALID");
  if (t_end > 0.0 && t_end < dt) throw ValidationError("t_end must be >= dt", "CONFIG_INVALID");
  if (!(picard_tol > 0.0)) throw ValidationError("picard_tol must be > 0", "CONFIG_INVALID");
  if (picard_max_iter < 1) throw ValidationError("picard_max_iter must be >= 1", "CONFIG_INVALID");
  if (diagnostics_every < 1)
    throw ValidationError("diagnostics_every must be >= 1", "CONFIG_INVALID");
  if (max_halvings < 0) throw ValidationError("max_halvings must be >= 0", "CONFIG_INVALID");
  if (snapshot_every < 0) throw ValidationError("snapshot_every must be >= 0", "CONFIG_INVALID");
  if (!(advect.cfl_limit > 0.0)) throw ValidationError("cfl_limit must be > 0", "CONFIG_INVALID");
  aeex::validate(initial);
}

std::string format_record(const DiagnosticsRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g", r.t,
                r.energy, r.q_l1, r.q_l2, r.q_linf, r.circulation, r.support_radius,
                r.picard_iters, r.picard_residual);
  return buf;
}

Simulation::Simulation(SimConfig config)
    : config_(std::move(config)),
      grid_((config_.validate(),
             make_grid(build_map(config_.shape), config_.n_r, config_.n_theta, config_.r_max))),
      filter_(grid_, config_.alpha) {}

SimState Simulation::initial_state() const {
  return state_from(make_vorticity(grid_, config_.initial));
}

SimState Simulation::state_from(ScalarField q, double t) const {
  if (q.grid()->size() != grid_->size()) throw ValidationError("vorticity on a different grid");
  SimState s;
  s.t = t;
  s.u = filter_.solve(q);
  s.q = std::move(q);
  s.support_threshold = 1e-10 * s.q.max_abs();
  return s;
}

VelocityField Simulation::picard_map(const VelocityField& u_in, const ScalarField& q0,
                                     double dt) const {
  return filter_.solve(advect(q0, u_in, dt, config_.advect));
}

VelocityField Simulation::picard_map(const VelocityField& u_start, const VelocityField& u_in,
                                     const ScalarField& q0, double dt,
                                     ScalarField* q_out) const {
  ScalarField q = advect(q0, u_start, u_in, dt, config_.advect);
  VelocityField u = filter_.solve(q);
  if (q_out) *q_out = std::move(q);
  return u;
}

SimState Simulation::step(const SimState& state, double dt, StepReport* report) const {
  if (!(dt > 0.0)) throw ValidationError("step needs dt > 0");
  VelocityField uk = state.u;
  if (state.dt_prev > 0.0 && state.u_prev.grid())
    uk = extrapolate(state.u, state.u_prev, dt / state.dt_prev);

  StepReport rep;
  ScalarField qk;
  double res = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= config_.picard_max_iter; ++k) {
    ScalarField q = advect(state.q, state.u, uk, dt, config_.advect, &rep.advect);
    VelocityField next = filter_.solve(q);
    const double norm = velocity_h1_norm(next);
    const double diff = velocity_h1_distance(next, uk);
    res = norm > 0.0 ? diff / norm : diff;
    rep.residuals.push_back(res);
    rep.iterations = k;
    uk = std::move(next);
    qk = std::move(q);
    if (res < config_.picard_tol) break;
  }
  rep.residual = res;
  if (!(res < config_.picard_tol)) {
    std::ostringstream os;
    os << "Picard iteration stalled at relative residual " << res << " after "
       << rep.iterations << " iterations (dt " << dt << ")";
    throw NumericError(os.str(), "PICARD");
  }

  SimState next;
  next.t = state.t + dt;
  next.q = std::move(qk);
  next.u_prev = state.u;
  next.u = std::move(uk);
  next.dt_prev = dt;
  next.support_threshold = state.support_threshold;
  next.history = state.history;
  if (report) *report = std::move(rep);
  return next;
}

std::vector<double> Simulation::picard_differences(const SimState& state, double dt,
                                                   int iterations) const {
  std::vector<double> out;
  VelocityField uk = state.u;
  for (int k = 0; k < iterations; ++k) {
    VelocityField next = picard_map(state.u, uk, state.q, dt);
    const double norm = velocity_h1_norm(next);
    const double diff = velocity_h1_distance(next, uk);
    out.push_back(norm > 0.0 ? diff / norm : diff);
    uk = std::move(next);
  }
  return out;
}

double contraction_ratio(const std::vector<double>& d, double floor) {
  double rho = 0.0;
  for (std::size_t k = 1; k < d.size(); ++k)
    if (d[k - 1] > floor && d[k] > floor) rho = std::max(rho, d[k] / d[k - 1]);
  return rho;
}

DiagnosticsRecord Simulation::diagnose(const SimState& s) const {
  DiagnosticsRecord r;
  r.t = s.t;
  r.energy = kinetic_energy(s.u);
  r.q_l1 = lp_norm(s.q, 1.0);
  r.q_l2 = lp_norm(s.q, 2.0);
  r.q_linf = lp_norm(s.q, 0.0);
  r.circulation = integrate(s.q);
  r.support_radius = support_radius(s.q, s.support_threshold).radius;
  const auto [lo, hi] = std::minmax_element(s.q.values().begin(), s.q.values().end());
  r.q_min = *lo;
  r.q_max = *hi;
  r.max_speed = s.u.max_speed();
  return r;
}

void write_diagnostics(const std::string& path, const std::vector<DiagnosticsRecord>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path, "IO");
  out << diagnostics_header << '\n';
  for (const auto& r : rows) out << format_record(r) << '\n';
}

RunResult run(const SimConfig& config, const RunOptions& opt) {
  Simulation sim(config);
  RunResult res;
  SimState st = sim.initial_state();
  const bool files = !opt.output_dir.empty();
  if (files) std::filesystem::create_directories(opt.output_dir);

  auto snapshot = [&](std::size_t n) {
    if (!files || config.snapshot_every <= 0 || n % config.snapshot_every != 0) return;
    char name[64];
    std::snprintf(name, sizeof name, "q_%06zu.bin", n);
    write_snapshot((std::filesystem::path(opt.output_dir) / name).string(), st.q, config.alpha,
                   st.t);
  };
  auto flush = [&] {
    if (files)
      write_diagnostics((std::filesystem::path(opt.output_dir) / "diagnostics.csv").string(),
                        st.history);
  };

  double speed = st.u.max_speed();
  double speed_integral = 0.0;
  StepReport last;
  {
    DiagnosticsRecord r = sim.diagnose(st);
    st.history.push_back(r);
  }
  if (opt.observer) opt.observer(st, last);
  snapshot(0);

  auto advance = [&](auto&& self, double h, int depth) -> void {
    try {
      StepReport rep;
      SimState next = sim.step(st, h, &rep);
      const double s1 = next.u.max_speed();
      speed_integral += 0.5 * h * (speed + s1);
      speed = s1;
      st = std::move(next);
      last = rep;
      res.steps.push_back(std::move(rep));
      if (opt.observer) opt.observer(st, last);
    } catch (const Error& e) {
      if (!retryable(e) || depth >= config.max_halvings) throw;
      ++res.halvings;
      self(self, 0.5 * h, depth + 1);
      self(self, 0.5 * h, depth + 1);
    }
  };

  const auto n_steps =
      config.t_end > 0.0 ? static_cast<std::size_t>(std::ceil(config.t_end / config.dt - 1e-9))
                         : std::size_t{0};
  try {
    for (std::size_t n = 1; n <= n_steps; ++n) {
      const double target = n == n_steps ? config.t_end : static_cast<double>(n) * config.dt;
      advance(advance, target - st.t, 0);
      st.t = target;
      if (n % static_cast<std::size_t>(config.diagnostics_every) == 0 || n == n_steps) {
        DiagnosticsRecord r = sim.diagnose(st);
        r.picard_iters = last.iterations;
        r.picard_residual = last.residual;
        r.speed_integral = speed_integral;
        r.step = n;
        st.history.push_back(r);
      }
      snapshot(n);
    }
  } catch (...) {
    flush();
    throw;
  }
  flush();
  res.state = std::move(st);
  return res;
}

double smooth_cutoff(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - x));
  const double b = std::exp(-1.0 / x);
  return a / (a + b);
}

VelocityField approximate_initial(const ScalarField& stream, double n, double alpha) {
  const MappedGrid& g = *stream.grid();
  if (n < 4.0)
    throw ValidationError("cutoff radius must be at least twice the mapped obstacle diameter");
  if (2.0 * n > g.r_max()) throw DomainError("cutoff annulus extends beyond r_max");
  double mean = 0.0, area = 0.0;
  for (std::size_t i = 0; i < g.n_r(); ++i) {
    const double r = g.r(i);
    if (r <= n || r >= 2.0 * n) continue;
    for (std::size_t j = 0; j < g.n_theta(); ++j) {
      const double w = g.area_weight(i, j);
      mean += w * stream.at(i, j);
      area += w;
    }
  }
  if (area > 0.0) mean /= area;
  ScalarField cut(stream.grid(), QuantityTag::phi);
  for (std::size_t i = 0; i < g.n_r(); ++i) {
    const double chi = smooth_cutoff((g.r(i) - n) / n);
    for (std::size_t j = 0; j < g.n_theta(); ++j) cut.at(i, j) = chi * (stream.at(i, j) - mean);
  }
  return VelocityField::from_stream(std::move(cut), alpha);
}

}  // namespace aeex
