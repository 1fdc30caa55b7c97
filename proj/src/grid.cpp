#include "aeex/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "aeex/error.hpp"
#include "aeex/fft.hpp"

namespace aeex {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

MappedGrid::MappedGrid(const ConformalMap& map, std::size_t n_r, std::size_t n_theta,
                       double r_max)
    : map_(map), n_r_(n_r), n_theta_(n_theta), r_max_(r_max) {
  if (n_r < 16) throw ValidationError("n_r must be at least 16");
  if (n_theta < 16 || n_theta % 2 != 0) throw ValidationError("n_theta must be even and >= 16");
  if (!(r_max > 1.0) || !std::isfinite(r_max)) throw ValidationError("r_max must exceed 1");
  s_max_ = std::log(r_max);
  ds_ = s_max_ / static_cast<double>(n_r - 1);
  dtheta_ = kTwoPi / static_cast<double>(n_theta);

  const std::size_t n = size();
  H_.resize(n);
  z_.resize(n);
  dz_.resize(n);
  d2z_.resize(n);
  Hbar_.assign(n_r, 0.0);
  for (std::size_t i = 0; i < n_r; ++i) {
    // last node exactly at r_max
    const double si = (i + 1 == n_r) ? s_max_ : s(i);
    for (std::size_t j = 0; j < n_theta; ++j) {
      const std::size_t k = index(i, j);
      const double th = theta(j);
      z_[k] = map_.z_of_zeta(si, th);
      dz_[k] = map_.dz_dzeta(si, th);
      d2z_[k] = map_.d2z_dzeta2(si, th);
      H_[k] = std::norm(dz_[k]);
      Hbar_[i] += H_[k];
    }
    Hbar_[i] /= static_cast<double>(n_theta);
  }

  // trapezoid with third-order end corrections
  ws_.assign(n_r, ds_);
  const double c[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  for (int e = 0; e < 3; ++e) {
    ws_[e] = c[e] * ds_;
    ws_[n_r - 1 - e] = c[e] * ds_;
  }
}

double MappedGrid::r(std::size_t i) const {
  return (i + 1 == n_r_) ? r_max_ : std::exp(s(i));
}

MappedPoint MappedGrid::locate(Vec2 x) const {
  const cplx w = map_.w_of_z(to_complex(x));
  const double rw = std::abs(w);
  if (rw < 1.0 - 1e-12) throw DomainError("point lies inside the obstacle");
  if (rw > r_max_ * (1.0 + 1e-12)) throw ExtrapolationError("point lies beyond r_max");
  double th = std::arg(w);
  if (th < 0.0) th += kTwoPi;
  return {std::clamp(std::log(rw), 0.0, s_max_), th};
}

double MappedGrid::min_cell_size() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < size(); ++k) m = std::min(m, std::sqrt(H_[k]));
  return m * std::min(ds_, dtheta_);
}

GridPtr make_grid(const ConformalMap& map, std::size_t n_r, std::size_t n_theta, double r_max) {
  return std::make_shared<const MappedGrid>(map, n_r, n_theta, r_max);
}

ScalarField::ScalarField(GridPtr grid, QuantityTag tag, double fill)
    : grid_(std::move(grid)), tag_(tag), values_(grid_->size(), fill) {}

ScalarField::ScalarField(GridPtr grid, QuantityTag tag, std::vector<double> values)
    : grid_(std::move(grid)), tag_(tag), values_(std::move(values)) {
  if (values_.size() != grid_->size()) throw ValidationError("field size does not match grid");
}

double ScalarField::sample(Vec2 x) const { return sample_mapped(grid_->locate(x)); }

double ScalarField::sample_mapped(MappedPoint p) const {
  const Stencil st = make_stencil(*grid_, p.s, p.theta);
  return interpolate(st, values_.data(), grid_->n_theta());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// cubic Lagrange weights on nodes 0..3 at position t
std::array<double, 4> lagrange4(double t) {
  const double a = t, b = t - 1.0, c = t - 2.0, d = t - 3.0;
  return {-b * c * d / 6.0, a * c * d / 2.0, -a * b * d / 2.0, a * b * c / 6.0};
}

}  // namespace

Stencil make_stencil(const MappedGrid& g, double s, double theta) {
  Stencil st;
  const std::size_t nr = g.n_r(), nt = g.n_theta();
  double x = std::clamp(s / g.ds(), 0.0, static_cast<double>(nr - 1));
  auto ci = static_cast<std::size_t>(x);
  if (ci >= nr - 1) ci = nr - 2;
  st.cell_i = ci;
  st.i0 = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(ci) - 1, 0,
                                     static_cast<std::ptrdiff_t>(nr) - 4);
  st.ws = lagrange4(x - static_cast<double>(st.i0));

  double y = theta / g.dtheta();
  y -= std::floor(y / static_cast<double>(nt)) * static_cast<double>(nt);
  auto cj = static_cast<std::size_t>(y);
  if (cj >= nt) cj = nt - 1;
  st.cell_j = cj;
  for (int m = 0; m < 4; ++m) st.j[m] = (cj + nt - 1 + m) % nt;
  st.wt = lagrange4(y - static_cast<double>(cj) + 1.0);
  return st;
}

double interpolate(const Stencil& st, const double* v, std::size_t nt) {
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    const double* row = v + (st.i0 + a) * nt;
    const double line =
        st.wt[0] * row[st.j[0]] + st.wt[1] * row[st.j[1]] + st.wt[2] * row[st.j[2]] +
        st.wt[3] * row[st.j[3]];
    acc += st.ws[a] * line;
  }
  return acc;
}

double interpolate_clipped(const Stencil& st, const double* v, std::size_t nt) {
  const double val = interpolate(st, v, nt);
  const std::size_t j1 = (st.cell_j + 1) % nt;
  const double* r0 = v + st.cell_i * nt;
  const double* r1 = r0 + nt;
  const double lo = std::min({r0[st.cell_j], r0[j1], r1[st.cell_j], r1[j1]});
  const double hi = std::max({r0[st.cell_j], r0[j1], r1[st.cell_j], r1[j1]});
  return std::clamp(val, lo, hi);
}

double integrate(const ScalarField& f) {
  const MappedGrid& g = *f.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.n_r(); ++i)
    for (std::size_t j = 0; j < g.n_theta(); ++j) acc += g.area_weight(i, j) * f.at(i, j);
  return acc;
}

double lp_norm(const ScalarField& f, double p) {
  if (p <= 0.0) return f.max_abs();
  const MappedGrid& g = *f.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.n_r(); ++i)
    for (std::size_t j = 0; j < g.n_theta(); ++j)
      acc += g.area_weight(i, j) * std::pow(std::abs(f.at(i, j)), p);
  return std::pow(acc, 1.0 / p);
}

namespace {

std::vector<double> spectral_theta(const MappedGrid& g, const std::vector<double>& f, int order) {
  const std::size_t nr = g.n_r(), nt = g.n_theta(), nm = g.modes();
  RowFft fft(nr, nt);
  std::vector<cplx> c(nr * nm);
  fft.forward(f.data(), c.data());
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t k = 0; k < nm; ++k) {
      const double kk = static_cast<double>(k);
      cplx& v = c[i * nm + k];
      if (order == 1)
        v = (k == nt / 2) ? cplx(0.0) : cplx(0.0, kk) * v;
      else
        v *= -kk * kk;
    }
  }
  std::vector<double> out(nr * nt);
  fft.backward(c.data(), out.data());
  return out;
}

}  // namespace

std::vector<double> d_theta(const MappedGrid& g, const std::vector<double>& f) {
  return spectral_theta(g, f, 1);
}

std::vector<double> d_theta2(const MappedGrid& g, const std::vector<double>& f) {
  return spectral_theta(g, f, 2);
}

std::vector<double> d_s(const MappedGrid& g, const std::vector<double>& f) {
  const std::size_t nr = g.n_r(), nt = g.n_theta();
  const double ih = 1.0 / g.ds();
  std::vector<double> out(f.size());
  auto F = [&](std::size_t i, std::size_t j) { return f[i * nt + j]; };
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t i = 2; i + 2 < nr; ++i)
      out[i * nt + j] =
          (F(i - 2, j) - 8.0 * F(i - 1, j) + 8.0 * F(i + 1, j) - F(i + 2, j)) * (ih / 12.0);
    for (int side = 0; side < 2; ++side) {
      // mirror indices for the top end; derivative changes sign
      auto idx = [&](std::size_t m) { return side == 0 ? m : nr - 1 - m; };
      const double sg = side == 0 ? 1.0 : -1.0;
      out[idx(0) * nt + j] = sg * ih *
                             (-25.0 / 12.0 * F(idx(0), j) + 4.0 * F(idx(1), j) -
                              3.0 * F(idx(2), j) + 4.0 / 3.0 * F(idx(3), j) - 0.25 * F(idx(4), j));
      out[idx(1) * nt + j] = sg * ih *
                             (-0.25 * F(idx(0), j) - 5.0 / 6.0 * F(idx(1), j) +
                              1.5 * F(idx(2), j) - 0.5 * F(idx(3), j) + F(idx(4), j) / 12.0);
    }
  }
  return out;
}

std::vector<double> d_s2(const MappedGrid& g, const std::vector<double>& f) {
  const std::size_t nr = g.n_r(), nt = g.n_theta();
  const double ih2 = 1.0 / (g.ds() * g.ds());
  std::vector<double> out(f.size());
  auto F = [&](std::size_t i, std::size_t j) { return f[i * nt + j]; };
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t i = 2; i + 2 < nr; ++i)
      out[i * nt + j] = (-F(i - 2, j) + 16.0 * F(i - 1, j) - 30.0 * F(i, j) +
                         16.0 * F(i + 1, j) - F(i + 2, j)) *
                        (ih2 / 12.0);
    for (int side = 0; side < 2; ++side) {
      auto idx = [&](std::size_t m) { return side == 0 ? m : nr - 1 - m; };
      out[idx(0) * nt + j] =
          ih2 * (15.0 / 4.0 * F(idx(0), j) - 77.0 / 6.0 * F(idx(1), j) +
                 107.0 / 6.0 * F(idx(2), j) - 13.0 * F(idx(3), j) + 61.0 / 12.0 * F(idx(4), j) -
                 5.0 / 6.0 * F(idx(5), j));
      out[idx(1) * nt + j] =
          ih2 * (5.0 / 6.0 * F(idx(0), j) - 1.25 * F(idx(1), j) - F(idx(2), j) / 3.0 +
                 7.0 / 6.0 * F(idx(3), j) - 0.5 * F(idx(4), j) + F(idx(5), j) / 12.0);
    }
  }
  return out;
}

}  // namespace aeex
