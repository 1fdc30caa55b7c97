// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aeex/cli.hpp"
#include "aeex/greens.hpp"
#include "aeex/simulation.hpp"
#include "aeex/verify.hpp"
#include "oracles.hpp"

using namespace aeex;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

// Largest physical cell edge among nodes with |x| <= radius.
double cell_size_within(const MappedGrid& g, double radius) {
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < g.n_r(); ++i)
    for (std::size_t j = 0; j < g.n_theta(); ++j) {
      const cplx z = g.z()[g.index(i, j)];
      if (std::abs(z) > radius) continue;
      h = std::max({h, std::abs(g.z()[g.index(i + 1, j)] - z),
                    std::abs(g.z()[g.index(i, (j + 1) % g.n_theta())] - z)});
    }
  return h;
}

// Mean azimuthal velocity on a circle of radius rho about c.
double mean_u_theta(const VelocityField& u, Vec2 c, double rho, int n = 256) {
  std::vector<Vec2> pts;
  for (int k = 0; k < n; ++k) {
    const double t = 2 * kPi * k / n;
    pts.push_back({c.x + rho * std::cos(t), c.y + rho * std::sin(t)});
  }
  const auto v = evaluate_velocity(u, pts);
  double ut = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 2 * kPi * k / n;
    ut += (-std::sin(t) * v[k].x + std::cos(t) * v[k].y) / n;
  }
  return ut;
}

// ---------------------------------------------------------------- 1
Outcome greens_identities() {
  double sym = 0.0, bdry = 0.0;
  std::vector<double> orders;
  const std::vector<double> hs{1e-2, 5e-3, 2.5e-3};
  for (const ObstacleShape& sh : {ObstacleShape{Disk{1.0}}, ObstacleShape{Ellipse{2.0, 1.0}}}) {
    const ConformalMap m(sh);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ur(1.05, 6.0), ut(0.0, 2 * kPi);
    auto point = [&](double r_lo) {
      const double r = std::max(r_lo, ur(rng)), t = ut(rng);
      return m.inverse({r * std::cos(t), r * std::sin(t)});
    };
    for (int k = 0; k < 500; ++k) {
      const Vec2 x = point(1.05), y = point(1.05);
      sym = std::max(sym, std::abs(green_eval(m, x, y) - green_eval(m, y, x)));
    }
    const Vec2 y = point(1.05);
    for (int k = 0; k < 64; ++k) {
      const double t = 2 * kPi * k / 64;
      bdry = std::max(bdry, std::abs(green_eval(m, m.inverse({std::cos(t), std::sin(t)}), y)));
    }
    // five-point Laplacian of G(., y) away from y and the boundary
    std::vector<std::pair<Vec2, Vec2>> pairs;
    while (pairs.size() < 20) {
      const Vec2 x = point(1.3), yy = point(1.3);
      if (norm2(x - yy) > 0.5) pairs.push_back({x, yy});
    }
    std::vector<double> err;
    for (double h : hs) {
      double e = 0.0;
      for (const auto& [x, yy] : pairs) {
        const double lap = (green_eval(m, {x.x + h, x.y}, yy) + green_eval(m, {x.x - h, x.y}, yy) +
                            green_eval(m, {x.x, x.y + h}, yy) + green_eval(m, {x.x, x.y - h}, yy) -
                            4.0 * green_eval(m, x, yy)) / (h * h);
        e = std::max(e, std::abs(lap));
      }
      err.push_back(e);
    }
    for (std::size_t k = 1; k < err.size(); ++k) orders.push_back(std::log2(err[k - 1] / err[k]));
  }
  const auto [omin, omax] = std::minmax_element(orders.begin(), orders.end());
  const bool pass = sym < 1e-12 && bdry < 1e-10 && *omin >= 1.8 && *omax <= 2.2;
  return {pass, "symmetry " + sci(sym) + " < 1e-12, boundary " + sci(bdry) +
                    " < 1e-10, FD-Laplacian orders in [" + fmt("%.3f", *omin) + ", " +
                    fmt("%.3f", *omax) + "] within [1.8, 2.2]"};
}

// ---------------------------------------------------------------- 2
Outcome poisson_cross_validation() {
  const ConformalMap m(Disk{1.0});
  const double rc = 2.5, w = 0.2;
  auto qf = [&](double r) { return std::exp(-(r - rc) * (r - rc) / (2 * w * w)); };
  std::vector<Vec2> probes;
  for (int k = 0; k < 20; ++k) {
    const double r = 1.1 + 4.9 * k / 19.0, t = 0.3 + 1.7 * k;
    probes.push_back({r * std::cos(t), r * std::sin(t)});
  }
  std::vector<double> ref;
  double scale = 0.0;
  for (const Vec2& p : probes) {
    ref.push_back(oracle::ring_stream(m, qf, rc - 6 * w, rc + 6 * w, p));
    scale = std::max(scale, std::abs(ref.back()));
  }
  std::vector<double> errs, dss;
  for (std::size_t n : {64u, 128u, 256u}) {
    const auto g = make_grid(m, n, 2 * n, 16.0);
    ScalarField q(g, QuantityTag::q);
    for (std::size_t i = 0; i < g->n_r(); ++i)
      for (std::size_t j = 0; j < g->n_theta(); ++j) q.at(i, j) = qf(std::sqrt(norm2(g->node(i, j))));
    const ScalarField psi = poisson_solve(g, q);
    double e = 0.0;
    for (std::size_t k = 0; k < probes.size(); ++k) e = std::max(e, std::abs(psi.sample(probes[k]) - ref[k]));
    errs.push_back(e / scale);
    dss.push_back(g->ds());
  }
  const double o1 = std::log(errs[0] / errs[1]) / std::log(dss[0] / dss[1]);
  const double o2 = std::log(errs[1] / errs[2]) / std::log(dss[1] / dss[2]);
  const bool pass = errs[1] < 1e-4 && o1 >= 2.0 && o2 >= 2.0;
  return {pass, "relative error 64x128 " + sci(errs[0]) + ", 128x256 " + sci(errs[1]) +
                    " < 1e-4, 256x512 " + sci(errs[2]) + "; orders " + fmt("%.2f", o1) + ", " +
                    fmt("%.2f", o2) + " >= 2"};
}

// ---------------------------------------------------------------- 3
Outcome hand_value() {
  const auto g = make_grid(build_map(Disk{1.0}), 256, 512, 16.0);
  std::string detail;
  double worst = 0.0;
  for (double w : {0.2, 0.1}) {
    const ScalarField q = make_vorticity(g, GaussianVortex{{2.0, 0.0}, w, 2 * kPi});
    const double err = std::abs(poisson_solve(g, q).sample({3.0, 0.0}) + std::log(5.0));
    worst = std::max(worst, err);
    detail += "width " + fmt("%.2f", w) + ": |psi(3,0) + ln 5| " + sci(err) + "; ";
  }
  return {worst < 1e-3, detail + "tolerance 1e-3"};
}

// ---------------------------------------------------------------- 4
Outcome filter_oracle() {
  const double sig = 0.3;
  const Vec2 c{5.0, 0.0};
  auto qf = [&](double r) { return std::exp(-r * r / (2 * sig * sig)) / (2 * kPi * sig * sig); };
  const auto g = make_grid(build_map(Disk{0.1}), 384, 512, 160.0);
  ScalarField q(g, QuantityTag::q);
  for (std::size_t i = 0; i < g->n_r(); ++i)
    for (std::size_t j = 0; j < g->n_theta(); ++j) q.at(i, j) = qf(std::sqrt(norm2(g->node(i, j) - c)));
  const std::vector<double> rhos{0.5, 0.75, 1.0, 1.5, 2.0};

  const oracle::RadialFilter rf(qf, 0.5, 12.0, 10000);
  const VelocityField u = filter_solve(g, q, 0.5);
  double e_filter = 0.0;
  for (double rho : rhos)
    e_filter = std::max(e_filter, std::abs(mean_u_theta(u, c, rho) - rf.u_theta(rho)) / rf.u_theta(rho));

  // alpha -> 0: the Gaussian vortex, u_theta = (1 - exp(-rho^2 / 2 sig^2)) / (2 pi rho)
  const VelocityField u0 = filter_solve(g, q, 1e-3);
  double e_degen = 0.0;
  for (double rho : rhos) {
    const double ref = (1.0 - std::exp(-rho * rho / (2 * sig * sig))) / (2 * kPi * rho);
    e_degen = std::max(e_degen, std::abs(mean_u_theta(u0, c, rho) - ref) / ref);
  }
  return {e_filter < 1e-3 && e_degen < 1e-2,
          "alpha 0.5 vs radial ODE " + sci(e_filter) + " < 1e-3; alpha 1e-3 vs Euler vortex " +
              sci(e_degen) + " < 1e-2"};
}

// ---------------------------------------------------------------- 5
Outcome rotation_transport() {
  const RotationHistory h = rotation_test();
  bool monotone = true, within = true;
  const std::vector<const std::vector<double>*> norms{&h.l1, &h.l2, &h.linf};
  double worst = 0.0;
  for (const auto* v : norms)
    for (std::size_t n = 1; n < v->size(); ++n) {
      monotone = monotone && (*v)[n] <= (*v)[n - 1] * (1.0 + 1e-12);
      worst = std::max(worst, std::abs((*v)[n] / v->front() - 1.0));
      within = within && std::abs((*v)[n] / v->front() - 1.0) <= 1e-2;
    }
  return {h.bound_violations == 0 && monotone && within,
          std::to_string(h.bound_violations) + " bound violations (0 allowed); norms " +
              (monotone ? "non-increasing" : "INCREASING") + " (round-off slack 1e-12 relative); " +
              "max relative change " + sci(worst) + " <= 1e-2"};
}

// ---------------------------------------------------------------- 6, 7, 11 share the pair runs
struct PairRun {
  SimConfig config;
  RunResult result;
  double seconds = 0.0;
  std::vector<double> weak_relative, weak_absolute;
  double energy_drift = 0.0;
  bool l2_monotone = true;
};

PairRun pair_run(std::size_t n_r, std::size_t n_theta, double dt) {
  PairRun p;
  p.config.n_r = n_r;
  p.config.n_theta = n_theta;
  p.config.dt = dt;
  p.config.t_end = 1.0;
  p.config.initial = VortexPair{{3.0, 0.0}, 2.0, 0.5, 1.0};
  p.config.diagnostics_every = static_cast<int>(std::lround(1e-2 / dt));
  const auto t0 = std::chrono::steady_clock::now();
  const GridPtr g = make_grid(build_map(p.config.shape), n_r, n_theta, p.config.r_max);
  WeakFormMonitor mon(g, default_weak_tests());
  RunOptions opt;
  opt.observer = [&](const SimState& s, const StepReport&) { mon.observe(s.t, s.q, s.u); };
  p.result = run(p.config, opt);
  p.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  p.weak_relative = mon.relative_residual();
  p.weak_absolute = mon.residual();
  const auto& h = p.result.state.history;
  for (std::size_t k = 0; k < h.size(); ++k) {
    p.energy_drift = std::max(p.energy_drift, std::abs(h[k].energy - h[0].energy) / h[0].energy);
    if (k > 0) p.l2_monotone = p.l2_monotone && h[k].q_l2 <= h[k - 1].q_l2 * (1.0 + 1e-12);
  }
  return p;
}

Outcome support_bound(const PairRun& p) {
  const auto g = make_grid(build_map(p.config.shape), p.config.n_r, p.config.n_theta, p.config.r_max);
  const auto& h = p.result.state.history;
  double margin = 1e300;
  for (const auto& d : h) {
    const double bound = h.front().support_radius + d.speed_integral + 2.0 * cell_size_within(*g, d.support_radius);
    margin = std::min(margin, bound - d.support_radius);
  }
  return {margin >= 0.0, std::to_string(h.size()) + " checkpoints to t = 1, min(bound - radius) " +
                             fmt("%.4f", margin) + " >= 0"};
}

Outcome energy(const PairRun& coarse, const PairRun& fine) {
  const double ratio = coarse.energy_drift / fine.energy_drift;
  return {coarse.energy_drift < 1e-4 && ratio >= 4.0 && coarse.l2_monotone && fine.l2_monotone,
          "drift 128x256 dt 1e-3 " + sci(coarse.energy_drift) + " < 1e-4; 255x512 dt 5e-4 " +
              sci(fine.energy_drift) + "; shrink " + fmt("%.2f", ratio) + " >= 4; |q|_2 " +
              (coarse.l2_monotone && fine.l2_monotone ? "non-increasing" : "INCREASING")};
}

Outcome weak_form(const PairRun& coarse, const PairRun& fine) {
  bool improving = true;
  double worst = 0.0;
  std::string detail;
  for (std::size_t m = 0; m < fine.weak_relative.size(); ++m) {
    improving = improving && fine.weak_relative[m] < coarse.weak_relative[m];
    worst = std::max(worst, fine.weak_relative[m]);
    detail += sci(coarse.weak_relative[m]) + " -> " + sci(fine.weak_relative[m]) + "; ";
  }
  return {improving && worst < 5e-2,
          "relative residual coarse -> fine per test: " + detail + "all improving, fine max " +
              sci(worst) + " < 5e-2"};
}

// ---------------------------------------------------------------- 8
Outcome contraction() {
  SimConfig c;
  c.initial = VortexPair{{3.0, 0.0}, 2.0, 0.5, 1.0};
  const Simulation sim(c);
  const SimState s = sim.initial_state();
  std::vector<double> rhos;
  std::string detail;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    rhos.push_back(contraction_ratio(sim.picard_differences(s, dt, 3)));
    detail += "dt " + sci(dt) + ": rho " + sci(rhos.back()) + "; ";
  }
  bool pass = true;
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    pass = pass && rhos[k] > 0.0 && rhos[k] < 1.0;
    if (k > 0) pass = pass && rhos[k] < rhos[k - 1];
  }
  return {pass, detail + "each < 1 and decreasing with dt"};
}

// ---------------------------------------------------------------- 9
Outcome scaling() {
  std::string detail;
  bool pass = true;
  for (const ObstacleShape& sh : {ObstacleShape{Disk{1.0}}, ObstacleShape{Ellipse{2.0, 1.0}}}) {
    SimConfig c;
    c.shape = sh;
    const EstimateReport r = verify_estimates(c);
    pass = pass && r.grad_spread < 5.0 && r.hess_spread < 5.0;
    detail += std::string(std::holds_alternative<Disk>(sh) ? "disk" : "ellipse") + " gradient " +
              fmt("%.3f", r.grad_spread) + ", hessian " + fmt("%.3f", r.hess_spread) + "; ";
  }
  return {pass, detail + "max/min < 5"};
}

// ---------------------------------------------------------------- 10
Outcome approximation() {
  const auto g = make_grid(build_map(Disk{1.0}), 256, 128, 64.0);
  const ScalarField q = make_vorticity(g, GaussianVortex{{2.5, 0.5}, 0.4, 1.0});
  const VelocityField u = filter_solve(g, q, 0.2);
  std::vector<double> d;
  std::string detail;
  for (double n : {4.0, 8.0, 16.0}) {
    d.push_back(velocity_h1_distance(approximate_initial(u.stream(), n, 0.2), u));
    detail += "n " + fmt("%.0f", n) + ": " + sci(d.back()) + "; ";
  }
  return {d[1] < d[0] && d[2] < d[1], detail + "strictly decreasing"};
}

// ---------------------------------------------------------------- 12
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "aeex_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"grid": {"n_r": 64, "n_theta": 128, "r_max": 16.0}, "dt": 0.001,
    "t_end": 0.05, "diagnostics_every": 5})";
  std::vector<std::string> csv;
  for (const char* out : {"a", "b"}) {
    const std::string o = (dir / out).string(), c = cfg.string();
    const char* argv[] = {"aeex", "run", "--config", c.c_str(), "--output", o.c_str()};
    std::ostringstream so, se;
    if (parse_and_dispatch(6, argv, so, se) != 0) return {false, "run failed: " + se.str()};
    std::ifstream in(dir / out / "diagnostics.csv", std::ios::binary);
    csv.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return {!csv[0].empty() && csv[0] == csv[1],
          "two runs, " + std::to_string(csv[0].size()) + " bytes each, " +
              (csv[0] == csv[1] ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  int failures = 0;
  // `charged` adds the time of shared runs the criterion depends on.
  auto report = [&](int id, const char* name, double budget, const std::function<Outcome()>& f,
                    double charged = 0.0) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s =
        charged + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && s < budget;
    failures += pass ? 0 : 1;
    std::printf("%s %2d %s: %s; runtime %.1f s < %.0f s\n", pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), s, budget);
    std::fflush(stdout);
  };

  report(1, "greens_identities", 10, greens_identities);
  report(2, "poisson_cross_validation", 60, poisson_cross_validation);
  report(3, "hand_value", 30, hand_value);
  report(4, "filter_oracle", 60, filter_oracle);
  report(5, "rotation_transport", 30, rotation_transport);

  PairRun coarse, fine;
  std::string run_error;
  try {
    coarse = pair_run(128, 256, 1e-3);
    fine = pair_run(255, 512, 5e-4);
  } catch (const std::exception& e) {
    run_error = e.what();
  }
  auto shared = [&](auto f) {
    return [&, f] { return run_error.empty() ? f() : Outcome{false, "pair run failed: " + run_error}; };
  };
  const double both = coarse.seconds + fine.seconds;
  report(6, "support_bound", 300, shared([&] { return support_bound(coarse); }), coarse.seconds);
  report(7, "energy_conservation", 600, shared([&] { return energy(coarse, fine); }), both);
  report(8, "picard_contraction", 120, contraction);
  report(9, "estimate_scaling", 300, scaling);
  report(10, "approximation", 120, approximation);
  report(11, "weak_form", 300, shared([&] { return weak_form(coarse, fine); }), both);
  report(12, "determinism", 60, determinism);
  std::printf("pair runs: 128x256 %.1f s, 255x512 %.1f s\n", coarse.seconds, fine.seconds);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
