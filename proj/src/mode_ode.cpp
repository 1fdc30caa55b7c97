#include "aeex/numerov.hpp"

#include <complex>

#include "aeex/error.hpp"

namespace aeex {

namespace {
// end closure weights on F_{n-3}, F_{n-2}, F_{n-1}
constexpr double e0 = -1.0 / 24.0, e1 = 0.25, e2 = 7.0 / 24.0;
}  // namespace

NumerovLine::NumerovLine(std::size_t n, double h) : n_(n), h_(h) {
  if (n < 6) throw ValidationError("Numerov line needs at least 6 nodes");
}

NumerovLine::Factor NumerovLine::factor(const double* kappa, double beta) const {
  const std::size_t n = n_;
  const double q = h_ * h_ / 12.0;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0);
  b[0] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    a[i] = 1.0 - q * kappa[i - 1];
    b[i] = -2.0 - 10.0 * q * kappa[i];
    c[i] = 1.0 - q * kappa[i + 1];
  }
  const double h2 = h_ * h_;
  const std::size_t m = n - 1;
  // unreduced Robin row: p f_{n-3} + a f_{n-2} + b f_{n-1}
  const double p = -h2 * e0 * kappa[m - 2];
  double am = 1.0 - h2 * e1 * kappa[m - 1];
  double bm = -(1.0 + h_ * beta) - h2 * e2 * kappa[m];
  Factor f;
  f.n_ = n;
  if (a[m - 1] == 0.0) throw NumericError("degenerate Numerov row");
  f.elim_ = p / a[m - 1];
  am -= f.elim_ * b[m - 1];
  bm -= f.elim_ * c[m - 1];
  a[m] = am;
  b[m] = bm;

  f.lower_.assign(n, 0.0);
  f.diag_inv_.assign(n, 0.0);
  f.upper_.assign(n, 0.0);
  // Thomas forward elimination
  double d = b[0];
  f.diag_inv_[0] = 1.0 / d;
  f.upper_[0] = c[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double l = a[i] * f.diag_inv_[i - 1];
    d = b[i] - l * c[i - 1];
    if (d == 0.0) throw NumericError("singular Numerov system");
    f.lower_[i] = l;
    f.diag_inv_[i] = 1.0 / d;
    f.upper_[i] = c[i];
  }
  return f;
}

template <class T>
void NumerovLine::Factor::solve(T* x) const {
  const std::size_t n = n_;
  x[n - 1] -= elim_ * x[n - 2];
  for (std::size_t i = 1; i < n; ++i) x[i] -= lower_[i] * x[i - 1];
  x[n - 1] *= diag_inv_[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - upper_[i] * x[i + 1]) * diag_inv_[i];
}

template <class T>
void NumerovLine::source_rhs(const T* g, T f0, T* out) const {
  const std::size_t n = n_;
  const double q = h_ * h_ / 12.0, h2 = h_ * h_;
  out[0] = f0;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = q * (g[i - 1] + 10.0 * g[i] + g[i + 1]);
  out[n - 1] = h2 * (e0 * g[n - 3] + e1 * g[n - 2] + e2 * g[n - 1]);
}

template <class T>
void NumerovLine::apply(const T* f, const T* F, double beta, T* out) const {
  const std::size_t n = n_;
  const double q = h_ * h_ / 12.0, h2 = h_ * h_;
  out[0] = f[0];
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = f[i + 1] - 2.0 * f[i] + f[i - 1] - q * (F[i - 1] + 10.0 * F[i] + F[i + 1]);
  out[n - 1] = f[n - 2] - (1.0 + h_ * beta) * f[n - 1] -
               h2 * (e0 * F[n - 3] + e1 * F[n - 2] + e2 * F[n - 1]);
}

template void NumerovLine::Factor::solve<double>(double*) const;
template void NumerovLine::Factor::solve<std::complex<double>>(std::complex<double>*) const;
template void NumerovLine::source_rhs<double>(const double*, double, double*) const;
template void NumerovLine::source_rhs<std::complex<double>>(const std::complex<double>*,
                                                            std::complex<double>,
                                                            std::complex<double>*) const;
template void NumerovLine::apply<double>(const double*, const double*, double, double*) const;
template void NumerovLine::apply<std::complex<double>>(const std::complex<double>*,
                                                       const std::complex<double>*, double,
                                                       std::complex<double>*) const;

}  // namespace aeex
