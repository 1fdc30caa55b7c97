#include "aeex/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <fftw3.h>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "aeex/config.hpp"
#include "aeex/error.hpp"
#include "aeex/verify.hpp"

namespace aeex {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("AEEX_THREADS")) {
    const int n = std::atoi(env);
    if (n < 1) throw ValidationError("AEEX_THREADS must be a positive integer", "USAGE");
    omp_set_num_threads(n);
  }
#endif
}

SimConfig load(const std::string& path, const std::vector<std::string>& overrides) {
  nlohmann::json j = read_config_json(path);
  for (const auto& o : overrides) apply_override(j, o);
  return config_from_json(j);
}

void write_effective(const SimConfig& c, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / "effective_config.json");
  if (!out) throw ValidationError("cannot write to " + dir, "IO");
  out << config_to_json(c).dump(2) << '\n';
}

int cmd_run(const SimConfig& c, const std::string& dir, std::ostream& out) {
  write_effective(c, dir);
  RunOptions opt;
  opt.output_dir = dir;
  const RunResult r = run(c, opt);
  const auto& h = r.state.history;
  out << "steps " << r.steps.size() << " halvings " << r.halvings << " t " << g17(r.state.t)
      << " energy " << g17(h.back().energy) << " relative_drift "
      << g17(std::abs(h.back().energy - h.front().energy) / h.front().energy) << '\n';
  out << "wrote " << (std::filesystem::path(dir) / "diagnostics.csv").string() << '\n';
  return 0;
}

// Largest physical cell edge among nodes with |x| <= radius.
double cell_size_within(const MappedGrid& g, double radius) {
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < g.n_r(); ++i)
    for (std::size_t j = 0; j < g.n_theta(); ++j) {
      const cplx z = g.z()[g.index(i, j)];
      if (std::abs(z) > radius) continue;
      const cplx zr = g.z()[g.index(i + 1, j)];
      const cplx zt = g.z()[g.index(i, (j + 1) % g.n_theta())];
      h = std::max({h, std::abs(zr - z), std::abs(zt - z)});
    }
  return h;
}

int cmd_verify(const SimConfig& c, const std::string& dir, std::ostream& out) {
  bool ok = true;
  auto line = [&](const std::string& name, bool pass, const std::string& detail) {
    out << (pass ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
    ok = ok && pass;
  };

  const EstimateReport est = verify_estimates(c);
  out << "R,q_l1,q_l2,grad_norm,hess_norm,grad_ratio,hess_ratio,skipped\n";
  for (const auto& r : est.rows)
    out << g17(r.R) << ',' << g17(r.q_l1) << ',' << g17(r.q_l2) << ',' << g17(r.grad_norm) << ','
        << g17(r.hess_norm) << ',' << g17(r.grad_ratio) << ',' << g17(r.hess_ratio) << ','
        << (r.skipped ? 1 : 0) << '\n';
  line("gradient_ratio_spread", est.grad_spread < 5.0, g17(est.grad_spread) + " < 5");
  line("hessian_ratio_spread", est.hess_spread < 5.0, g17(est.hess_spread) + " < 5");
  line("rotation_h1_ratio", est.h1_ratio_max <= 1.1, g17(est.h1_ratio_max) + " <= 1.1");

  Simulation sim(c);
  double qmin0 = 0.0, qmax0 = 0.0;
  std::size_t bound_violations = 0, picard_non_monotone = 0;
  double coupling = 0.0;
  bool first = true;
  RunOptions opt;
  opt.observer = [&](const SimState& s, const StepReport& rep) {
    const auto [lo, hi] = std::minmax_element(s.q.values().begin(), s.q.values().end());
    if (first) {
      qmin0 = *lo;
      qmax0 = *hi;
      first = false;
    }
    if (*lo < qmin0 || *hi > qmax0) ++bound_violations;
    for (std::size_t k = 1; k < rep.residuals.size(); ++k)
      if (!(rep.residuals[k] < rep.residuals[k - 1])) ++picard_non_monotone;
  };
  if (!dir.empty()) opt.output_dir = dir;
  const RunResult r = run(c, opt);
  {
    const VelocityField again = sim.filter().solve(r.state.q);
    const double n = velocity_h1_norm(r.state.u);
    coupling = n > 0.0 ? velocity_h1_distance(again, r.state.u) / n : 0.0;
  }
  const auto& h = r.state.history;
  const DiagnosticsRecord& h0 = h.front();
  bool lp_ok = true, support_ok = true;
  double circ_drift = 0.0, energy_drift = 0.0, support_margin = 1e300;
  for (const auto& d : h) {
    lp_ok = lp_ok && d.q_l1 <= h0.q_l1 * 1.01 && d.q_l2 <= h0.q_l2 * 1.01 &&
            d.q_linf <= h0.q_linf * 1.01;
    const double bound = h0.support_radius + d.speed_integral +
                         2.0 * cell_size_within(*sim.grid(), d.support_radius);
    support_margin = std::min(support_margin, bound - d.support_radius);
    support_ok = support_ok && d.support_radius <= bound;
    if (d.t > 0.0 && h0.q_l1 > 0.0)
      circ_drift = std::max(circ_drift, std::abs(d.circulation - h0.circulation) / h0.q_l1 / d.t);
    if (h0.energy > 0.0)
      energy_drift = std::max(energy_drift, std::abs(d.energy - h0.energy) / h0.energy);
  }
  line("max_principle", bound_violations == 0,
       std::to_string(bound_violations) + " states outside [min q0, max q0]");
  line("lp_norms_nonincreasing", lp_ok, "q_l1, q_l2, q_linf <= 1.01 x initial");
  line("circulation", circ_drift <= 1e-6, g17(circ_drift) + " per unit time (relative to |q0|_1)");
  line("support_bound", support_ok, "min margin " + g17(support_margin));
  line("picard_monotone", picard_non_monotone == 0,
       std::to_string(picard_non_monotone) + " non-decreasing residual pairs");
  line("coupling_consistency", coupling <= 10.0 * c.picard_tol, g17(coupling));
  out << "energy_relative_drift " << g17(energy_drift) << '\n';
  return ok ? 0 : 2;
}

int cmd_convergence(const SimConfig& base, int levels, std::ostream& out) {
  if (levels < 2) throw ValidationError("--levels must be >= 2", "USAGE");
  struct Level {
    SimConfig c;
    double energy, probe, q_l2;
  };
  std::vector<Level> ls;
  for (int l = 0; l < levels; ++l) {
    SimConfig c = base;
    const std::size_t f = std::size_t{1} << l;
    c.n_r = (base.n_r - 1) * f + 1;
    c.n_theta = base.n_theta * f;
    c.dt = base.dt / static_cast<double>(f);
    c.diagnostics_every = std::max(1, base.diagnostics_every * static_cast<int>(f));
    const RunResult r = run(c);
    const MappedGrid& g = *r.state.u.grid();
    const Vec2 probe = to_vec(g.map().z_of_zeta(std::log(3.0), 0.4));
    const Vec2 up = evaluate_velocity(r.state.u, {probe}).front();
    ls.push_back({c, r.state.history.back().energy, std::sqrt(norm2(up)), r.state.history.back().q_l2});
  }
  out << "level,n_r,n_theta,dt,energy,energy_diff,energy_order,probe_speed,probe_diff,probe_order\n";
  for (int l = 0; l < levels; ++l) {
    const Level& L = ls[l];
    std::string ed, eo, pd, po;
    if (l > 0) {
      ed = g17(std::abs(L.energy - ls[l - 1].energy));
      pd = g17(std::abs(L.probe - ls[l - 1].probe));
    }
    if (l > 1) {
      auto order = [](double a, double b) { return b > 0.0 && a > 0.0 ? std::log2(a / b) : NAN; };
      eo = g17(order(std::abs(ls[l - 1].energy - ls[l - 2].energy), std::abs(L.energy - ls[l - 1].energy)));
      po = g17(order(std::abs(ls[l - 1].probe - ls[l - 2].probe), std::abs(L.probe - ls[l - 1].probe)));
    }
    out << l << ',' << L.c.n_r << ',' << L.c.n_theta << ',' << g17(L.c.dt) << ',' << g17(L.energy)
        << ',' << ed << ',' << eo << ',' << g17(L.probe) << ',' << pd << ',' << po << '\n';
  }
  return 0;
}

int cmd_info(std::ostream& out) {
  out << "aeex 1.0.0\n";
  out << "compiler " << __VERSION__ << '\n';
  out << "fftw " << fftw_version << '\n';
#ifdef _OPENMP
  out << "openmp threads " << omp_get_max_threads() << '\n';
#else
  out << "openmp off\n";
#endif
  out << "snapshot: 64-byte header (magic AEEX0001, n_r, n_theta, r_max, alpha, time, tag, 0) "
         "then float64 values, r outer\n";
  out << "diagnostics: " << diagnostics_header << '\n';
  out << config_schema();
  return 0;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Euler-alpha flow past an obstacle"};
  app.require_subcommand(1);
  std::string config, output = "output";
  std::vector<std::string> sets;
  int levels = 3;

  auto add_common = [&](CLI::App* sc, bool with_output) {
    sc->add_option("--config", config, "JSON config file")->required();
    if (with_output) sc->add_option("--output", output, "output directory");
    sc->add_option("--set", sets, "KEY=VALUE override (repeatable)");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "integrate to t_end and write diagnostics");
  add_common(run_cmd, true);
  CLI::App* verify_cmd = app.add_subcommand("verify", "estimate tables and invariant checks");
  add_common(verify_cmd, true);
  CLI::App* conv_cmd = app.add_subcommand("convergence", "refinement study");
  add_common(conv_cmd, false);
  conv_cmd->add_option("--levels", levels, "number of refinement levels");
  CLI::App* info_cmd = app.add_subcommand("info", "build information and config schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error USAGE: " << e.what() << '\n' << app.help();
    return 1;
  }

  try {
    apply_thread_cap();
    if (info_cmd->parsed()) return cmd_info(out);
    const SimConfig c = load(config, sets);
    if (run_cmd->parsed()) return cmd_run(c, output, out);
    if (verify_cmd->parsed()) return cmd_verify(c, verify_cmd->count("--output") ? output : "", out);
    return cmd_convergence(c, levels, out);
  } catch (const ValidationError& e) {
    err << "error " << e.code() << ": " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error " << e.code() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error INTERNAL: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace aeex
