#include "aeex/elliptic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "aeex/error.hpp"
#include "aeex/fft.hpp"
#include "aeex/numerov.hpp"
#include "aeex/spectral.hpp"

namespace aeex {

namespace {

double kk(std::size_t k) { return static_cast<double>(k) * static_cast<double>(k); }


void check_support(const ScalarField& q) {
  const MappedGrid& g = *q.grid();
  const double peak = q.max_abs();
  if (peak == 0.0) return;
  for (std::size_t i = 0; i < g.n_r(); ++i) {
    if (g.r(i) < 0.5 * g.r_max()) continue;
    for (std::size_t j = 0; j < g.n_theta(); ++j)
      if (std::abs(q.at(i, j)) > 1e-12 * peak)
        throw DomainError("source not supported inside r_max/2", "SUPPORT");
  }
}

std::vector<double> times_factor(const MappedGrid& g, const std::vector<double>& f,
                                 double scale = 1.0) {
  std::vector<double> out(f.size());
  const auto& H = g.factor();
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = scale * H[k] * f[k];
  return out;
}

// Mode-diagonal problem f'' = (k^2 + c_i) f + g with per-mode far-field Robin.
struct ModeFactors {
  NumerovLine line;
  std::vector<NumerovLine::Factor> factors;
  std::vector<double> beta;

  ModeFactors(const MappedGrid& g, const std::vector<double>& c, std::vector<double> betas)
      : line(g.n_r(), g.ds()), beta(std::move(betas)) {
    const std::size_t n = g.n_r();
    std::vector<double> kappa(n);
    for (std::size_t k = 0; k < g.modes(); ++k) {
      for (std::size_t i = 0; i < n; ++i) kappa[i] = kk(k) + (c.empty() ? 0.0 : c[i]);
      factors.push_back(line.factor(kappa.data(), beta[k]));
    }
  }

  // out = solution for sources g (lines) and Dirichlet values b (per mode, may be null)
  void solve(const cplx* g, const cplx* b, cplx* out) const {
    const std::size_t n = line.n();
    for (std::size_t k = 0; k < factors.size(); ++k) {
      line.source_rhs(g + k * n, b ? b[k] : cplx(0.0), out + k * n);
      factors[k].solve(out + k * n);
    }
  }
};

std::vector<double> laplace_betas(const MappedGrid& g) {
  std::vector<double> b(g.modes());
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = static_cast<double>(k);
  return b;
}

std::vector<double> screened_betas(const MappedGrid& g, double alpha) {
  const double x = std::sqrt(g.factor_mean().back()) / alpha;
  std::vector<double> b(g.modes());
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = screened_dtn(static_cast<int>(k), x);
  return b;
}

// BiCGStab over the reals; A and P act on vectors of length n.
using LinOp = std::function<void(const std::vector<double>&, std::vector<double>&)>;

int bicgstab(const LinOp& A, const LinOp& P, const std::vector<double>& b, std::vector<double>& x,
             double tol, int max_iter, double* final_res) {
  const std::size_t n = b.size();
  auto dotp = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += u[i] * v[i];
    return s;
  };
  const double bnorm = std::sqrt(dotp(b, b));
  if (bnorm == 0.0) {
    x.assign(n, 0.0);
    *final_res = 0.0;
    return 0;
  }
  std::vector<double> r(n), rh(n), p(n, 0.0), v(n, 0.0), s(n), t(n), ph(n), sh(n);
  A(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  rh = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double res = std::sqrt(dotp(r, r)) / bnorm;
  int it = 0;
  for (; it < max_iter && res > tol; ++it) {
    const double rho1 = dotp(rh, r);
    if (rho1 == 0.0) break;
    const double beta = (rho1 / rho) * (alpha / omega);
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    P(p, ph);
    A(ph, v);
    alpha = rho1 / dotp(rh, v);
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    P(s, sh);
    A(sh, t);
    const double tt = dotp(t, t);
    omega = tt > 0.0 ? dotp(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * ph[i] + omega * sh[i];
      r[i] = s[i] - omega * t[i];
    }
    rho = rho1;
    res = std::sqrt(dotp(r, r)) / bnorm;
    if (omega == 0.0) break;
  }
  *final_res = res;
  return it;
}

std::vector<double>& as_real(std::vector<cplx>& v, std::vector<double>& buf) {
  buf.assign(reinterpret_cast<double*>(v.data()), reinterpret_cast<double*>(v.data()) + 2 * v.size());
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- velocity

VelocityField VelocityField::from_stream(ScalarField stream, ScalarField vorticity, double alpha) {
  const MappedGrid& g = *stream.grid();
  VelocityField u;
  u.alpha_ = alpha;
  const auto& phi = stream.values();
  u.phi_t_ = d_theta(g, phi);
  u.phi_s_ = d_s(g, phi);
  // wall derivative from the same closure the solvers use
  {
    const auto phi_tt = d_theta2(g, phi);
    const auto& H = g.factor();
    const auto& w = vorticity.values();
    NumerovLine line(g.n_r(), g.ds());
    const std::size_t nt = g.n_theta();
    for (std::size_t j = 0; j < nt; ++j) {
      double f[3], F[3];
      for (int i = 0; i < 3; ++i) {
        const std::size_t k = i * nt + j;
        f[i] = phi[k];
        F[i] = H[k] * w[k] - phi_tt[k];
      }
      u.phi_s_[j] = line.start_derivative(f, F);
    }
  }
  const auto& H = g.factor();
  u.vs_.resize(g.size());
  u.vt_.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    u.vs_[k] = -u.phi_t_[k] / H[k];
    u.vt_[k] = u.phi_s_[k] / H[k];
  }
  stream.set_tag(QuantityTag::phi);
  vorticity.set_tag(QuantityTag::omega);
  u.stream_ = std::move(stream);
  u.vorticity_ = std::move(vorticity);
  return u;
}

VelocityField VelocityField::from_stream(ScalarField stream, double alpha) {
  const MappedGrid& g = *stream.grid();
  const auto a = d_s2(g, stream.values());
  const auto b = d_theta2(g, stream.values());
  std::vector<double> w(g.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = (a[k] + b[k]) / g.factor()[k];
  ScalarField vort(stream.grid(), QuantityTag::omega, std::move(w));
  VelocityField u;
  u.alpha_ = alpha;
  u.phi_t_ = d_theta(g, stream.values());
  u.phi_s_ = d_s(g, stream.values());
  u.vs_.resize(g.size());
  u.vt_.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    u.vs_[k] = -u.phi_t_[k] / g.factor()[k];
    u.vt_[k] = u.phi_s_[k] / g.factor()[k];
  }
  stream.set_tag(QuantityTag::phi);
  u.stream_ = std::move(stream);
  u.vorticity_ = std::move(vort);
  return u;
}

VelocityField VelocityField::zero(GridPtr grid, double alpha) {
  VelocityField u;
  u.alpha_ = alpha;
  const std::size_t n = grid->size();
  u.stream_ = ScalarField(grid, QuantityTag::phi, 0.0);
  u.vorticity_ = ScalarField(grid, QuantityTag::omega, 0.0);
  u.phi_s_.assign(n, 0.0);
  u.phi_t_.assign(n, 0.0);
  u.vs_.assign(n, 0.0);
  u.vt_.assign(n, 0.0);
  return u;
}

Vec2 VelocityField::node_velocity(std::size_t i, std::size_t j) const {
  const MappedGrid& g = *grid();
  const std::size_t k = g.index(i, j);
  const cplx u = cplx(0.0, 1.0) * cplx(phi_s_[k], phi_t_[k]) / std::conj(g.dz()[k]);
  return to_vec(u);
}

double VelocityField::max_speed() const {
  const MappedGrid& g = *grid();
  double m = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    m = std::max(m, std::hypot(phi_s_[k], phi_t_[k]) / std::sqrt(g.factor()[k]));
  return m;
}

bool VelocityField::is_zero() const {
  return std::all_of(phi_s_.begin(), phi_s_.end(), [](double v) { return v == 0.0; }) &&
         std::all_of(phi_t_.begin(), phi_t_.end(), [](double v) { return v == 0.0; });
}

std::vector<Vec2> evaluate_velocity(const VelocityField& field, const std::vector<Vec2>& points) {
  const MappedGrid& g = *field.grid();
  std::vector<Vec2> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double rw = g.map().mapped_radius(points[p]);
    const MappedPoint mp = g.locate(points[p]);
    if (rw <= 1.0 + 1e-14) {
      out[p] = {0.0, 0.0};
      continue;
    }
    const Stencil st = make_stencil(g, mp.s, mp.theta);
    const double ps = interpolate(st, field.stream_s().data(), g.n_theta());
    const double pt = interpolate(st, field.stream_theta().data(), g.n_theta());
    const cplx dz = g.map().dz_dzeta(mp.s, mp.theta);
    out[p] = to_vec(cplx(0.0, 1.0) * cplx(ps, pt) / std::conj(dz));
  }
  return out;
}

// ---------------------------------------------------------------- Poisson

struct PoissonSolver::Impl {
  GridPtr grid;
  ModeLines lines;
  ModeFactors mf;
  explicit Impl(GridPtr g)
      : grid(std::move(g)), lines(*grid), mf(*grid, {}, laplace_betas(*grid)) {}

  // lines of the solution of f'' = k^2 f + src
  std::vector<cplx> solve_lines(const std::vector<cplx>& src) const {
    std::vector<cplx> out(src.size());
    mf.solve(src.data(), nullptr, out.data());
    return out;
  }
};

PoissonSolver::PoissonSolver(GridPtr grid) : impl_(std::make_unique<Impl>(std::move(grid))) {}
PoissonSolver::~PoissonSolver() = default;
PoissonSolver::PoissonSolver(PoissonSolver&&) noexcept = default;
PoissonSolver& PoissonSolver::operator=(PoissonSolver&&) noexcept = default;
const GridPtr& PoissonSolver::grid() const { return impl_->grid; }

ScalarField PoissonSolver::solve(const ScalarField& q) const {
  const MappedGrid& g = *impl_->grid;
  if (q.grid()->size() != g.size()) throw ValidationError("field and solver grids differ");
  check_support(q);
  const auto src = impl_->lines.to_lines(times_factor(g, q.values()).data());
  const auto psi = impl_->solve_lines(src);
  return ScalarField(impl_->grid, QuantityTag::psi, impl_->lines.to_phys(psi.data()));
}

ScalarField poisson_solve(const GridPtr& grid, const ScalarField& q) {
  return PoissonSolver(grid).solve(q);
}

// ---------------------------------------------------------------- filter

struct FilterSolver::Impl {
  GridPtr grid;
  double alpha;
  ModeLines lines;
  ModeFactors lap;    // Delta phi = omega
  ModeFactors helm;   // screened equation with the theta-mean factor
  bool radial;
  // radial: unit boundary responses per mode
  std::vector<double> omega_h, phi_h, dphi_h;
  // general: influence matrix on nodal boundary values
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  double cond = 1.0;

  Impl(GridPtr g, double a, bool coupled)
      : grid(std::move(g)),
        alpha(a),
        lines(*grid),
        lap(*grid, {}, laplace_betas(*grid)),
        helm(*grid, scaled_mean(*grid, a), screened_betas(*grid, a)),
        radial(grid->factor_is_radial() && !coupled) {
    if (radial)
      build_radial();
    else
      build_general();
  }

  static std::vector<double> scaled_mean(const MappedGrid& g, double a) {
    std::vector<double> c = g.factor_mean();
    for (double& v : c) v /= a * a;
    return c;
  }

  std::size_t n() const { return grid->n_r(); }
  std::size_t m() const { return grid->modes(); }

  void build_radial() {
    const std::size_t N = n(), M = m();
    const auto& Hb = grid->factor_mean();
    omega_h.assign(M * N, 0.0);
    phi_h.assign(M * N, 0.0);
    dphi_h.assign(M, 0.0);
    std::vector<double> zero(N, 0.0), src(N), F(N);
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
      double* w = &omega_h[k * N];
      double* f = &phi_h[k * N];
      helm.line.source_rhs(zero.data(), 1.0, w);
      helm.factors[k].solve(w);
      for (std::size_t i = 0; i < N; ++i) src[i] = Hb[i] * w[i];
      lap.line.source_rhs(src.data(), 0.0, f);
      lap.factors[k].solve(f);
      for (std::size_t i = 0; i < 3; ++i) F[i] = kk(k) * f[i] + src[i];
      dphi_h[k] = lap.line.start_derivative(f, F.data());
      const double ad = std::abs(dphi_h[k]);
      if (!(ad > 0.0) || !std::isfinite(ad))
        throw NumericError("influence matrix is singular", "INFLUENCE_SINGULAR");
      dmin = std::min(dmin, ad);
      dmax = std::max(dmax, ad);
    }
    cond = dmax / dmin;
  }

  // general-map screened solve: unknown lines, given source lines and
  // Dirichlet boundary coefficients
  std::vector<cplx> helmholtz_general(const std::vector<cplx>& g, const cplx* b) const {
    const std::size_t N = n(), M = m();
    const MappedGrid& G = *grid;
    const double ia2 = 1.0 / (alpha * alpha);
    std::vector<cplx> rhs(M * N);
    for (std::size_t k = 0; k < M; ++k)
      helm.line.source_rhs(g.data() + k * N, b ? b[k] : cplx(0.0), rhs.data() + k * N);

    const std::size_t len = 2 * M * N;
    auto cview = [](const std::vector<double>& v) { return reinterpret_cast<const cplx*>(v.data()); };
    LinOp A = [&](const std::vector<double>& x, std::vector<double>& y) {
      const cplx* xc = cview(x);
      const auto phys = lines.to_phys(xc);
      const auto P = lines.to_lines(times_factor(G, phys, ia2).data());
      std::vector<cplx> F(M * N);
      for (std::size_t k = 0; k < M; ++k)
        for (std::size_t i = 0; i < N; ++i) F[k * N + i] = kk(k) * xc[k * N + i] + P[k * N + i];
      y.resize(len);
      cplx* yc = reinterpret_cast<cplx*>(y.data());
      for (std::size_t k = 0; k < M; ++k)
        helm.line.apply(xc + k * N, F.data() + k * N, helm.beta[k], yc + k * N);
    };
    LinOp Pc = [&](const std::vector<double>& x, std::vector<double>& y) {
      y = x;
      cplx* yc = reinterpret_cast<cplx*>(y.data());
      for (std::size_t k = 0; k < M; ++k) helm.factors[k].solve(yc + k * N);
    };
    std::vector<double> bvec;
    as_real(rhs, bvec);
    std::vector<double> x;
    Pc(bvec, x);
    double res = 0.0;
    bicgstab(A, Pc, bvec, x, 1e-13, 400, &res);
    if (!(res <= 1e-10)) {
      std::ostringstream os;
      os << "screened solve did not converge, relative residual " << res;
      throw NumericError(os.str(), "SOLVER_DIVERGED");
    }
    const cplx* xc = cview(x);
    return std::vector<cplx>(xc, xc + M * N);
  }

  // Poisson lines for phi given omega lines; also returns the wall derivative lines
  std::vector<cplx> phi_from_omega(const std::vector<cplx>& w, std::vector<cplx>* dphi) const {
    const std::size_t N = n(), M = m();
    const auto phys = lines.to_phys(w.data());
    const auto src = lines.to_lines(times_factor(*grid, phys).data());
    std::vector<cplx> f(M * N);
    lap.solve(src.data(), nullptr, f.data());
    if (dphi) {
      dphi->assign(M, 0.0);
      for (std::size_t k = 0; k < M; ++k) {
        cplx F[3];
        for (std::size_t i = 0; i < 3; ++i) F[i] = kk(k) * f[k * N + i] + src[k * N + i];
        (*dphi)[k] = lap.line.start_derivative(f.data() + k * N, F);
      }
    }
    return f;
  }

  std::vector<double> wall_values(const std::vector<cplx>& d) const {
    const std::size_t nt = grid->n_theta();
    RowFft fft(1, nt);
    std::vector<cplx> c(d);
    std::vector<double> out(nt);
    fft.backward(c.data(), out.data());
    return out;
  }

  std::vector<cplx> wall_modes(const std::vector<double>& v) const {
    RowFft fft(1, grid->n_theta());
    std::vector<cplx> c(m());
    fft.forward(v.data(), c.data());
    return c;
  }

  void build_general() {
    const std::size_t nt = grid->n_theta();
    const std::size_t M = m(), N = n();
    Eigen::MatrixXd A(nt, nt);
    std::vector<cplx> zero(M * N, 0.0);
    for (std::size_t j = 0; j < nt; ++j) {
      std::vector<double> e(nt, 0.0);
      e[j] = 1.0;
      const auto b = wall_modes(e);
      const auto w = helmholtz_general(zero, b.data());
      std::vector<cplx> d;
      phi_from_omega(w, &d);
      const auto dv = wall_values(d);
      for (std::size_t l = 0; l < nt; ++l) A(l, j) = dv[l];
    }
    lu = A.partialPivLu();
    const auto U = lu.matrixLU().diagonal().cwiseAbs();
    if (!(U.minCoeff() > 0.0) || !std::isfinite(U.maxCoeff()))
      throw NumericError("influence matrix is singular", "INFLUENCE_SINGULAR");
    cond = U.maxCoeff() / U.minCoeff();
  }

  void solve(const ScalarField& q, std::vector<double>& phi, std::vector<double>& omega) const {
    const std::size_t N = n(), M = m();
    const MappedGrid& G = *grid;
    const double ia2 = 1.0 / (alpha * alpha);
    const auto g = lines.to_lines(times_factor(G, q.values(), -ia2).data());
    std::vector<cplx> w(M * N), f(M * N);
    if (radial) {
      const auto& Hb = G.factor_mean();
      helm.solve(g.data(), nullptr, w.data());
      std::vector<cplx> src(M * N);
      for (std::size_t k = 0; k < M; ++k)
        for (std::size_t i = 0; i < N; ++i) src[k * N + i] = Hb[i] * w[k * N + i];
      lap.solve(src.data(), nullptr, f.data());
      for (std::size_t k = 0; k < M; ++k) {
        cplx F[3];
        for (std::size_t i = 0; i < 3; ++i) F[i] = kk(k) * f[k * N + i] + src[k * N + i];
        const cplx d = lap.line.start_derivative(f.data() + k * N, F);
        const cplx b = -d / dphi_h[k];
        for (std::size_t i = 0; i < N; ++i) {
          w[k * N + i] += b * omega_h[k * N + i];
          f[k * N + i] += b * phi_h[k * N + i];
        }
      }
    } else {
      const auto wp = helmholtz_general(g, nullptr);
      std::vector<cplx> d;
      phi_from_omega(wp, &d);
      const auto dv = wall_values(d);
      Eigen::VectorXd rhs(G.n_theta());
      for (std::size_t l = 0; l < G.n_theta(); ++l) rhs(l) = -dv[l];
      const Eigen::VectorXd bv = lu.solve(rhs);
      const auto b = wall_modes(std::vector<double>(bv.data(), bv.data() + bv.size()));
      w = helmholtz_general(g, b.data());
      f = phi_from_omega(w, nullptr);
    }
    phi = lines.to_phys(f.data());
    omega = lines.to_phys(w.data());
  }
};

FilterSolver::FilterSolver(GridPtr grid, double alpha, bool coupled) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive");
  impl_ = std::make_unique<Impl>(std::move(grid), alpha, coupled);
}
FilterSolver::~FilterSolver() = default;
FilterSolver::FilterSolver(FilterSolver&&) noexcept = default;
FilterSolver& FilterSolver::operator=(FilterSolver&&) noexcept = default;
const GridPtr& FilterSolver::grid() const { return impl_->grid; }
double FilterSolver::alpha() const { return impl_->alpha; }
double FilterSolver::influence_condition() const { return impl_->cond; }

VelocityField FilterSolver::solve(const ScalarField& q) const {
  if (q.grid()->size() != impl_->grid->size())
    throw ValidationError("field and solver grids differ");
  check_support(q);
  std::vector<double> phi, omega;
  impl_->solve(q, phi, omega);
  return VelocityField::from_stream(ScalarField(impl_->grid, QuantityTag::phi, std::move(phi)),
                                    ScalarField(impl_->grid, QuantityTag::omega, std::move(omega)),
                                    impl_->alpha);
}

VelocityField filter_solve(const GridPtr& grid, const ScalarField& q, double alpha) {
  return FilterSolver(grid, alpha).solve(q);
}

// ---------------------------------------------------------------- residuals

double poisson_residual(const ScalarField& q, const ScalarField& psi) {
  const MappedGrid& g = *q.grid();
  const ModeLines ml(g);
  const NumerovLine line(g.n_r(), g.ds());
  const std::size_t N = g.n_r(), M = g.modes();
  const auto src = ml.to_lines(times_factor(g, q.values()).data());
  const auto f = ml.to_lines(psi.values().data());
  std::vector<cplx> F(N), lhs(N), rhs(N);
  double res = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < M; ++k) {
    for (std::size_t i = 0; i < N; ++i) F[i] = kk(k) * f[k * N + i];
    line.apply(f.data() + k * N, F.data(), static_cast<double>(k), lhs.data());
    line.source_rhs(src.data() + k * N, cplx(0.0), rhs.data());
    for (std::size_t i = 0; i < N; ++i) {
      res = std::max(res, std::abs(lhs[i] - rhs[i]));
      scale = std::max(scale, std::abs(rhs[i]));
    }
  }
  return scale > 0.0 ? res / scale : res;
}

FilterResiduals filter_residuals(const ScalarField& q, const VelocityField& u) {
  const MappedGrid& g = *q.grid();
  const ModeLines ml(g);
  const NumerovLine line(g.n_r(), g.ds());
  const std::size_t N = g.n_r(), M = g.modes();
  const double a = u.alpha(), ia2 = 1.0 / (a * a);
  const auto betas = screened_betas(g, a);
  const auto gq = ml.to_lines(times_factor(g, q.values(), -ia2).data());
  const auto w = ml.to_lines(u.vorticity().values().data());
  const auto Pw = ml.to_lines(times_factor(g, u.vorticity().values(), ia2).data());
  const auto Hw = ml.to_lines(times_factor(g, u.vorticity().values()).data());
  const auto f = ml.to_lines(u.stream().values().data());
  FilterResiduals out;
  std::vector<cplx> F(N), lhs(N), rhs(N);
  double sh = 0.0, sp = 0.0;
  std::vector<cplx> dphi(M);
  for (std::size_t k = 0; k < M; ++k) {
    const cplx* wk = w.data() + k * N;
    for (std::size_t i = 0; i < N; ++i) F[i] = kk(k) * wk[i] + Pw[k * N + i];
    line.apply(wk, F.data(), betas[k], lhs.data());
    line.source_rhs(gq.data() + k * N, wk[0], rhs.data());
    for (std::size_t i = 1; i < N; ++i) {
      out.helmholtz = std::max(out.helmholtz, std::abs(lhs[i] - rhs[i]));
      sh = std::max(sh, std::abs(rhs[i]));
    }
    const cplx* fk = f.data() + k * N;
    for (std::size_t i = 0; i < N; ++i) F[i] = kk(k) * fk[i];
    line.apply(fk, F.data(), static_cast<double>(k), lhs.data());
    line.source_rhs(Hw.data() + k * N, cplx(0.0), rhs.data());
    for (std::size_t i = 0; i < N; ++i) {
      out.poisson = std::max(out.poisson, std::abs(lhs[i] - rhs[i]));
      sp = std::max(sp, std::abs(rhs[i]));
    }
  }
  if (sh > 0.0) out.helmholtz /= sh;
  if (sp > 0.0) out.poisson /= sp;
  double wall = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < g.n_theta(); ++j) wall = std::max(wall, std::abs(u.stream_s()[j]));
  for (double v : u.stream_s()) peak = std::max(peak, std::abs(v));
  out.wall_flux = peak > 0.0 ? wall / peak : wall;
  return out;
}

// ---------------------------------------------------------------- far field

double screened_dtn(int k, double x) {
  if (!(x > 0.0)) throw ValidationError("screened_dtn needs x > 0");
  // Q_0 = K_1(x)/K_0(x)
  double q0;
  if (x < 500.0) {
    q0 = std::cyl_bessel_k(1.0, x) / std::cyl_bessel_k(0.0, x);
  } else {
    // large-argument expansion of K_nu; the exponential factor cancels
    auto series = [x](double nu) {
      const double mu = 4.0 * nu * nu;
      double term = 1.0, sum = 1.0;
      for (int m = 1; m < 12; ++m) {
        term *= (mu - (2.0 * m - 1) * (2.0 * m - 1)) / (m * 8.0 * x);
        sum += term;
      }
      return sum;
    };
    q0 = series(1.0) / series(0.0);
  }
  if (k == 0) return x * q0;
  double q = q0;  // K_{m+1}/K_m
  for (int m = 1; m < k; ++m) q = 1.0 / q + 2.0 * m / x;
  return x / q + k;
}

// ---------------------------------------------------------------- norms

double h1_seminorm_sq(const std::vector<double>& ps, const std::vector<double>& pt,
                      const MappedGrid& g) {
  const auto& ws = g.s_weights();
  const std::size_t nt = g.n_theta();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.n_r(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t k = i * nt + j;
      row += ps[k] * ps[k] + pt[k] * pt[k];
    }
    acc += ws[i] * row;
  }
  return acc * g.dtheta();
}

namespace {
double weighted_sq(const std::vector<double>& a, const std::vector<double>* b, const MappedGrid& g) {
  const auto& ws = g.s_weights();
  const auto& H = g.factor();
  const std::size_t nt = g.n_theta();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.n_r(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t k = i * nt + j;
      const double d = b ? a[k] - (*b)[k] : a[k];
      row += H[k] * d * d;
    }
    acc += ws[i] * row;
  }
  return acc * g.dtheta();
}
}  // namespace

double velocity_h1_norm(const VelocityField& u) {
  const MappedGrid& g = *u.grid();
  return std::sqrt(h1_seminorm_sq(u.stream_s(), u.stream_theta(), g) +
                   weighted_sq(u.vorticity().values(), nullptr, g));
}

double velocity_h1_distance(const VelocityField& a, const VelocityField& b) {
  const MappedGrid& g = *a.grid();
  const std::size_t n = g.size();
  std::vector<double> ds(n), dt(n);
  for (std::size_t k = 0; k < n; ++k) {
    ds[k] = a.stream_s()[k] - b.stream_s()[k];
    dt[k] = a.stream_theta()[k] - b.stream_theta()[k];
  }
  return std::sqrt(h1_seminorm_sq(ds, dt, g) +
                   weighted_sq(a.vorticity().values(), &b.vorticity().values(), g));
}

double exterior_dirichlet_energy(const ScalarField& stream) {
  const MappedGrid& g = *stream.grid();
  const std::size_t nt = g.n_theta();
  const RowFft fft(1, nt);
  std::vector<cplx> c(fft.modes());
  fft.forward(stream.values().data() + (g.n_r() - 1) * nt, c.data());
  // phi = sum c_k e^{-|k|(s - S)} e^{i k theta}; each mode pair carries 4 pi k |c_k|^2
  double acc = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double w = (2 * k == nt) ? 1.0 : 4.0;
    acc += w * std::numbers::pi * static_cast<double>(k) * std::norm(c[k]);
  }
  return acc;
}

double kinetic_energy(const VelocityField& u) {
  const MappedGrid& g = *u.grid();
  const double a = u.alpha();
  return 0.5 * (h1_seminorm_sq(u.stream_s(), u.stream_theta(), g) +
                exterior_dirichlet_energy(u.stream()) +
                a * a * weighted_sq(u.vorticity().values(), nullptr, g));
}

}  // namespace aeex
