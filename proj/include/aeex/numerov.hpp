#pragma once

#include <cstddef>
#include <vector>

namespace aeex {

/// Fourth-order compact discretisation of f'' = kappa(s) f + g(s) on n uniform
/// nodes with spacing h.
///
/// Row 0 imposes a Dirichlet value. Rows 1..n-2 are the Numerov relation.
/// Row n-1 imposes f' + beta f = 0 through the integral Taylor identity
///   f_{n-2} = f_{n-1} - h f'_{n-1} + int_0^h t F(S-h+t) dt,   F = f'',
/// with F interpolated quadratically. That row touches f_{n-3}; the factor
/// eliminates it with row n-2 so the solve stays tridiagonal.
class NumerovLine {
 public:
  NumerovLine(std::size_t n, double h);

  std::size_t n() const { return n_; }
  double h() const { return h_; }

  class Factor {
   public:
    /// Solves in place; `x` holds the unreduced right-hand side on entry.
    template <class T>
    void solve(T* x) const;

   private:
    friend class NumerovLine;
    std::size_t n_ = 0;
    std::vector<double> lower_, diag_inv_, upper_;
    double elim_ = 0.0;  // multiplier of row n-2 subtracted from row n-1
  };

  Factor factor(const double* kappa, double beta) const;

  /// Right-hand side for source g and Dirichlet value f0.
  template <class T>
  void source_rhs(const T* g, T f0, T* out) const;

  /// Applies the unreduced rows given f and F = f'' - g (the part of f''
  /// depending on f). Row 0 returns f_0.
  template <class T>
  void apply(const T* f, const T* F, double beta, T* out) const;

  /// f'(0) from the start closure f_1 = f_0 + h f'_0 + int_0^h (h-t) F dt, F = f''.
  template <class T>
  T start_derivative(const T* f, const T* F) const {
    return (f[1] - f[0] - h_ * h_ * (c0 * F[0] + c1 * F[1] + c2 * F[2])) / h_;
  }

  static constexpr double c0 = 7.0 / 24.0, c1 = 0.25, c2 = -1.0 / 24.0;

 private:
  std::size_t n_;
  double h_;
};

}  // namespace aeex
