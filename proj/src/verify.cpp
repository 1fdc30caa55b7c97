#include "aeex/verify.hpp"

#include <algorithm>
#include <cmath>

#include "aeex/error.hpp"

namespace aeex {

std::vector<EstimateRow> estimate_table(const ObstacleShape& shape, const std::vector<double>& radii,
                                        double amplitude) {
  const ConformalMap map = build_map(shape);
  const std::size_t nt = map.is_disk() ? 16 : 128;
  const GridPtr g = make_grid(map, 512, nt, 64.0);
  const PoissonSolver poisson(g);
  std::vector<EstimateRow> rows;
  for (double R : radii) {
    EstimateRow row;
    row.R = R;
    const GaussianRing ring{0.75 * R, R / 30.0, amplitude};
    const ScalarField q = make_vorticity(g, ring);
    row.q_l1 = lp_norm(q, 1.0);
    row.q_l2 = lp_norm(q, 2.0);
    if (!(row.q_l1 > 0.0)) {
      row.skipped = true;
      rows.push_back(row);
      continue;
    }
    const ScalarField psi = poisson.solve(q);
    row.grad_norm = std::sqrt(h1_seminorm_sq(d_s(*g, psi.values()), d_theta(*g, psi.values()), *g) +
                              exterior_dirichlet_energy(psi));
    row.hess_norm = stream_hessian_norm(psi, q);
    row.grad_ratio = row.grad_norm / (R * (row.q_l2 + row.q_l1));
    row.hess_ratio = row.hess_norm / (R * row.q_l2 + row.q_l1);
    rows.push_back(row);
  }
  return rows;
}

double ratio_spread(const std::vector<EstimateRow>& rows, bool hessian) {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& r : rows) {
    if (r.skipped) continue;
    const double v = hessian ? r.hess_ratio : r.grad_ratio;
    lo = any ? std::min(lo, v) : v;
    hi = any ? std::max(hi, v) : v;
    any = true;
  }
  return any && lo > 0.0 ? hi / lo : 0.0;
}

double q_h1_norm(const ScalarField& q) {
  const MappedGrid& g = *q.grid();
  const auto& v = q.values();
  double l2 = 0.0;
  for (std::size_t i = 0; i < g.n_r(); ++i)
    for (std::size_t j = 0; j < g.n_theta(); ++j) l2 += g.area_weight(i, j) * v[g.index(i, j)] * v[g.index(i, j)];
  return std::sqrt(l2 + h1_seminorm_sq(d_s(g, v), d_theta(g, v), g));
}

double stream_hessian_norm(const ScalarField& psi, const ScalarField& lap) {
  const MappedGrid& g = *psi.grid();
  const auto& p = psi.values();
  const auto ps = d_s(g, p);
  const auto pt = d_theta(g, p);
  const auto pss = d_s2(g, p);
  const auto ptt = d_theta2(g, p);
  const auto pst = d_s(g, pt);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.n_r(); ++i) {
    for (std::size_t j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = g.index(i, j);
      const cplx fz = 0.5 * cplx(ps[k], -pt[k]);
      const cplx fzz = 0.25 * cplx(pss[k] - ptt[k], -2.0 * pst[k]);
      const cplx d1 = g.dz()[k], d2 = g.d2z()[k];
      const cplx hxx = (fzz * d1 - fz * d2) / (d1 * d1 * d1);
      const double l = lap.values()[k];
      // |D^2 f|^2 = (Delta f)^2 / 2 + 8 |f_zz|^2
      acc += g.area_weight(i, j) * (0.5 * l * l + 8.0 * std::norm(hxx));
    }
  }
  return std::sqrt(acc);
}

RotationHistory rotation_test(std::size_t n_r, std::size_t n_theta, std::size_t steps,
                              double t_end, Limiter limiter) {
  const GridPtr g = make_grid(build_map(Disk{1.0}), n_r, n_theta, 8.0);
  ScalarField phi(g, QuantityTag::phi), omega(g, QuantityTag::omega, 2.0);
  for (std::size_t i = 0; i < n_r; ++i)
    for (std::size_t j = 0; j < n_theta; ++j) phi.at(i, j) = 0.5 * norm2(g->node(i, j));
  const VelocityField u = VelocityField::from_stream(phi, omega, 0.1);

  RotationHistory h;
  h.initial = make_vorticity(g, GaussianVortex{{2.0, 0.0}, 0.6, 2.0 * std::numbers::pi * 0.36});
  const auto [lo, hi] = std::minmax_element(h.initial.values().begin(), h.initial.values().end());
  h.q_min0 = *lo;
  h.q_max0 = *hi;
  auto record = [&](double t, const ScalarField& q) {
    h.t.push_back(t);
    h.l1.push_back(lp_norm(q, 1.0));
    h.l2.push_back(lp_norm(q, 2.0));
    h.linf.push_back(lp_norm(q, 0.0));
    h.h1.push_back(q_h1_norm(q));
  };
  ScalarField q = h.initial;
  record(0.0, q);
  const double dt = t_end / static_cast<double>(steps);
  AdvectOptions opt;
  opt.limiter = limiter;
  for (std::size_t n = 1; n <= steps; ++n) {
    q = advect(q, u, dt, opt);
    for (double v : q.values())
      if (v < h.q_min0 || v > h.q_max0) ++h.bound_violations;
    record(static_cast<double>(n) * dt, q);
  }
  h.final = std::move(q);
  return h;
}

EstimateReport verify_estimates(const SimConfig& config) {
  EstimateReport rep;
  rep.rows = estimate_table(config.shape, {2.0, 4.0, 8.0, 16.0});
  rep.grad_spread = ratio_spread(rep.rows, false);
  rep.hess_spread = ratio_spread(rep.rows, true);
  const RotationHistory rot = rotation_test();
  for (double v : rot.h1) rep.h1_ratio.push_back(v / rot.h1.front());
  rep.h1_ratio_max = *std::max_element(rep.h1_ratio.begin(), rep.h1_ratio.end());
  return rep;
}

double Bump::value(Vec2 x) const {
  const double u = norm2(x - center) / (radius * radius);
  return u < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u)) : 0.0;
}

Vec2 Bump::gradient(Vec2 x) const {
  const Vec2 d = x - center;
  const double a2 = radius * radius;
  const double u = norm2(d) / a2;
  if (u >= 1.0) return {};
  const double chi = std::exp(1.0 - 1.0 / (1.0 - u));
  const double fu = -chi / ((1.0 - u) * (1.0 - u));
  return (2.0 * fu / a2) * d;
}

double Bump::laplacian(Vec2 x) const {
  const double a2 = radius * radius;
  const double u = norm2(x - center) / a2;
  if (u >= 1.0) return 0.0;
  const double chi = std::exp(1.0 - 1.0 / (1.0 - u));
  const double m = 1.0 - u;
  const double fu = -chi / (m * m);
  const double fuu = chi * (2.0 * u - 1.0) / (m * m * m * m);
  return 4.0 * (u * fuu + fu) / a2;
}

WeakFormMonitor::WeakFormMonitor(GridPtr grid, std::vector<Bump> tests)
    : grid_(std::move(grid)), tests_(std::move(tests)) {
  const MappedGrid& g = *grid_;
  for (const Bump& b : tests_) {
    if (!(b.radius > 0.0)) throw ValidationError("bump radius must be > 0");
    std::vector<double> cs(g.size()), ct(g.size()), lh(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Vec2 x = to_vec(g.z()[k]);
      const Vec2 gr = b.gradient(x);
      // chi_s + i chi_theta = conj(grad) * dz/dzeta * (1, i)
      const cplx c = cplx(gr.x, -gr.y) * g.dz()[k];
      cs[k] = c.real();
      ct[k] = -c.imag();
      lh[k] = b.laplacian(x) * g.factor()[k];
    }
    for (std::size_t j = 0; j < g.n_theta(); ++j)
      if (b.value(g.node(0, j)) != 0.0 || b.value(g.node(g.n_r() - 1, j)) != 0.0)
        throw ValidationError("test bump must vanish on both grid boundaries");
    chi_s_.push_back(std::move(cs));
    chi_t_.push_back(std::move(ct));
    lap_h_.push_back(std::move(lh));
  }
  const std::size_t n = tests_.size();
  l0_.assign(n, 0.0);
  flux_prev_.assign(n, 0.0);
  integral_.assign(n, 0.0);
  residual_.assign(n, 0.0);
  scale_.assign(n, 0.0);
}

void WeakFormMonitor::observe(double t, const ScalarField& q, const VelocityField& u) {
  const MappedGrid& g = *grid_;
  const auto& ws = g.s_weights();
  const double dth = g.dtheta();
  const double a2 = u.alpha() * u.alpha();
  for (std::size_t m = 0; m < tests_.size(); ++m) {
    double lhs = 0.0, flux = 0.0;
    for (std::size_t i = 0; i < g.n_r(); ++i) {
      double row_l = 0.0, row_f = 0.0;
      for (std::size_t j = 0; j < g.n_theta(); ++j) {
        const std::size_t k = g.index(i, j);
        row_l += u.stream_s()[k] * chi_s_[m][k] + u.stream_theta()[k] * chi_t_[m][k] +
                 a2 * u.vorticity().values()[k] * lap_h_[m][k];
        row_f += q.values()[k] * g.factor()[k] *
                 (u.mapped_s()[k] * chi_s_[m][k] + u.mapped_theta()[k] * chi_t_[m][k]);
      }
      lhs += ws[i] * row_l;
      flux += ws[i] * row_f;
    }
    lhs *= dth;
    flux *= dth;
    if (!started_) {
      l0_[m] = lhs;
    } else {
      integral_[m] += 0.5 * (t - t_prev_) * (flux + flux_prev_[m]);
    }
    flux_prev_[m] = flux;
    residual_[m] = std::max(residual_[m], std::abs(lhs - l0_[m] + integral_[m]));
    scale_[m] = std::max(scale_[m], std::abs(lhs - l0_[m]));
  }
  t_prev_ = t;
  started_ = true;
}

std::vector<double> WeakFormMonitor::relative_residual() const {
  std::vector<double> r(size());
  for (std::size_t m = 0; m < size(); ++m) r[m] = scale_[m] > 0.0 ? residual_[m] / scale_[m] : 0.0;
  return r;
}

std::vector<Bump> default_weak_tests() {
  return {{{3.0, 1.0}, 1.2}, {{3.2, -1.3}, 1.0}, {{3.4, 0.5}, 1.5}, {{2.6, -0.4}, 1.0},
          {{3.6, -0.7}, 1.3}};
}

}  // namespace aeex
