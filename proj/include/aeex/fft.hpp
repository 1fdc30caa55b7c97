#pragma once

#include <cstddef>

#include "aeex/conformal.hpp"

namespace aeex {

/// Batched real FFT along the inner (theta) index of a rows x n array.
/// Coefficients are normalised so that f(theta_j) = sum_k c_k e^{i k theta_j}
/// over the full Hermitian spectrum; the half spectrum has n/2 + 1 entries.
class RowFft {
 public:
  RowFft(std::size_t rows, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t n() const { return n_; }
  std::size_t modes() const { return n_ / 2 + 1; }

  void forward(const double* in, cplx* out) const;
  /// Overwrites `in`.
  void backward(cplx* in, double* out) const;

 private:
  std::size_t rows_;
  std::size_t n_;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

}  // namespace aeex
