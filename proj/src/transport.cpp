#include "aeex/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aeex/error.hpp"

namespace aeex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Clamp {
  double s_max;
  bool hit = false;
  void operator()(double& s) {
    if (s < 0.0) {
      s = 0.0;
      hit = true;
    } else if (s > s_max) {
      s = s_max;
      hit = true;
    }
  }
};

Vec2 physical(const MappedGrid& g, double s, double t) {
  return to_vec(g.map().z_of_zeta(s, t));
}

// mapped velocity of a gridded field at (s, theta)
void mapped_velocity(const MappedGrid& g, const double* vs, const double* vt, double s, double t,
                     double& os, double& ot) {
  const Stencil st = make_stencil(g, s, t);
  os = interpolate(st, vs, g.n_theta());
  ot = interpolate(st, vt, g.n_theta());
}

double courant(const MappedGrid& g, const VelocityField& u, double dt) {
  double c = 0.0;
  const auto& vs = u.mapped_s();
  const auto& vt = u.mapped_theta();
  for (std::size_t k = 0; k < g.size(); ++k)
    c = std::max(c, std::max(std::abs(vs[k]) / g.ds(), std::abs(vt[k]) / g.dtheta()));
  return c * dt;
}

}  // namespace

Vec2 trace_characteristic(const VelocityField& field, Vec2 x, double dt, bool* clamped) {
  const MappedGrid& g = *field.grid();
  const MappedPoint p = g.locate(x);
  const double* vs = field.mapped_s().data();
  const double* vt = field.mapped_theta().data();
  Clamp clamp{g.s_max()};
  double k1s, k1t, k2s, k2t, k3s, k3t, k4s, k4t;
  mapped_velocity(g, vs, vt, p.s, p.theta, k1s, k1t);
  double s = p.s - 0.5 * dt * k1s;
  clamp(s);
  mapped_velocity(g, vs, vt, s, p.theta - 0.5 * dt * k1t, k2s, k2t);
  s = p.s - 0.5 * dt * k2s;
  clamp(s);
  mapped_velocity(g, vs, vt, s, p.theta - 0.5 * dt * k2t, k3s, k3t);
  s = p.s - dt * k3s;
  clamp(s);
  mapped_velocity(g, vs, vt, s, p.theta - dt * k3t, k4s, k4t);
  s = p.s - dt / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
  const double t = p.theta - dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
  clamp(s);
  if (clamped) *clamped = clamp.hit;
  return physical(g, s, t);
}

Vec2 trace_characteristic(const MappedGrid& g, const VelocityFn& u, Vec2 x, double dt,
                          bool* clamped) {
  const MappedPoint p = g.locate(x);
  const ConformalMap& m = g.map();
  // d zeta / dt = (u1 + i u2) / (dz/dzeta)
  auto rhs = [&](double s, double t) {
    const cplx z = m.z_of_zeta(s, t);
    return to_complex(u(to_vec(z))) / m.dz_dzeta(s, t);
  };
  Clamp clamp{g.s_max()};
  auto step = [&](cplx z0, cplx k, double h) {
    cplx z = z0 - h * k;
    double s = z.real();
    clamp(s);
    return cplx(s, z.imag());
  };
  const cplx z0(p.s, p.theta);
  const cplx k1 = rhs(p.s, p.theta);
  const cplx z2 = step(z0, k1, 0.5 * dt);
  const cplx k2 = rhs(z2.real(), z2.imag());
  const cplx z3 = step(z0, k2, 0.5 * dt);
  const cplx k3 = rhs(z3.real(), z3.imag());
  const cplx z4 = step(z0, k3, dt);
  const cplx k4 = rhs(z4.real(), z4.imag());
  const cplx zf = step(z0, k1 + 2.0 * k2 + 2.0 * k3 + k4, dt / 6.0);
  if (clamped) *clamped = clamp.hit;
  return physical(g, zf.real(), zf.imag());
}

ScalarField advect(const ScalarField& q, const VelocityField& field, double dt,
                   const AdvectOptions& opt, AdvectStats* stats) {
  return advect(q, field, field, dt, opt, stats);
}

ScalarField advect(const ScalarField& q, const VelocityField& start, const VelocityField& end,
                   double dt, const AdvectOptions& opt, AdvectStats* stats) {
  if (!(dt > 0.0)) throw ValidationError("advect needs dt > 0");
  const MappedGrid& g = *q.grid();
  if (start.grid()->size() != g.size() || end.grid()->size() != g.size())
    throw ValidationError("advect fields live on different grids");
  const double c = std::max(courant(g, start, dt), courant(g, end, dt));
  if (stats) *stats = AdvectStats{c, 0};
  if (c > opt.cfl_limit) {
    std::ostringstream os;
    os << "Courant number " << c << " exceeds " << opt.cfl_limit;
    throw StepSizeError(os.str());
  }
  if (start.is_zero() && end.is_zero()) return q;

  const std::size_t nr = g.n_r(), nt = g.n_theta(), n = g.size();
  const auto& s0v = start.mapped_s();
  const auto& t0v = start.mapped_theta();
  const auto& s1v = end.mapped_s();
  const auto& t1v = end.mapped_theta();
  std::vector<double> smid(n), tmid(n);
  for (std::size_t k = 0; k < n; ++k) {
    smid[k] = 0.5 * (s0v[k] + s1v[k]);
    tmid[k] = 0.5 * (t0v[k] + t1v[k]);
  }
  const double* src = q.values().data();
  std::vector<double> out(n);
  std::size_t clamped = 0;
  const double smax = g.s_max();
  const bool cell = opt.limiter == Limiter::cell;
  const auto [lo_it, hi_it] = std::minmax_element(q.values().begin(), q.values().end());
  const double qlo = *lo_it, qhi = *hi_it;

#pragma omp parallel for reduction(+ : clamped) schedule(static)
  for (std::size_t i = 0; i < nr; ++i) {
    const double si = (i + 1 == nr) ? smax : g.s(i);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t k = i * nt + j;
      const double tj = g.theta(j);
      bool hit = false;
      auto cl = [&](double s) {
        if (s < 0.0) {
          hit = true;
          return 0.0;
        }
        if (s > smax) {
          hit = true;
          return smax;
        }
        return s;
      };
      const double k1s = s1v[k], k1t = t1v[k];
      double k2s, k2t, k3s, k3t, k4s, k4t;
      mapped_velocity(g, smid.data(), tmid.data(), cl(si - 0.5 * dt * k1s), tj - 0.5 * dt * k1t,
                      k2s, k2t);
      mapped_velocity(g, smid.data(), tmid.data(), cl(si - 0.5 * dt * k2s), tj - 0.5 * dt * k2t,
                      k3s, k3t);
      mapped_velocity(g, s0v.data(), t0v.data(), cl(si - dt * k3s), tj - dt * k3t, k4s, k4t);
      const double fs = cl(si - dt / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s));
      const double ft = tj - dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
      const Stencil st = make_stencil(g, fs, ft);
      out[k] = cell ? interpolate_clipped(st, src, nt)
                    : std::clamp(interpolate(st, src, nt), qlo, qhi);
      if (hit) ++clamped;
    }
  }
  if (stats) stats->clamped = clamped;
  return ScalarField(q.grid(), q.tag(), std::move(out));
}

SupportEstimate support_radius(const ScalarField& q, double threshold) {
  const MappedGrid& g = *q.grid();
  SupportEstimate est;
  est.threshold = threshold < 0.0 ? 1e-10 * q.max_abs() : threshold;
  for (std::size_t i = 0; i < g.n_r(); ++i)
    for (std::size_t j = 0; j < g.n_theta(); ++j)
      if (std::abs(q.at(i, j)) > est.threshold && q.at(i, j) != 0.0)
        est.radius = std::max(est.radius, std::sqrt(norm2(g.node(i, j))));
  return est;
}

}  // namespace aeex
