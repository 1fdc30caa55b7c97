#include "aeex/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace aeex {

namespace {

struct PlanPair {
  fftw_plan fwd;
  fftw_plan bwd;
};

// Planning is not thread-safe in FFTW; execution is.
std::mutex g_plan_mutex;
std::map<std::pair<std::size_t, std::size_t>, PlanPair> g_plans;

PlanPair plans_for(std::size_t rows, std::size_t n) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = g_plans.find({rows, n});
  if (it != g_plans.end()) return it->second;
  const int ni = static_cast<int>(n);
  const int nm = static_cast<int>(n / 2 + 1);
  const int howmany = static_cast<int>(rows);
  std::vector<double> r(rows * n);
  std::vector<fftw_complex> c(rows * (n / 2 + 1));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.fwd = fftw_plan_many_dft_r2c(1, &ni, howmany, r.data(), nullptr, 1, ni, c.data(), nullptr, 1,
                                 nm, flags);
  p.bwd = fftw_plan_many_dft_c2r(1, &ni, howmany, c.data(), nullptr, 1, nm, r.data(), nullptr, 1,
                                 ni, flags);
  g_plans.emplace(std::make_pair(rows, n), p);
  return p;
}

}  // namespace

RowFft::RowFft(std::size_t rows, std::size_t n) : rows_(rows), n_(n) {
  const PlanPair p = plans_for(rows, n);
  fwd_ = p.fwd;
  bwd_ = p.bwd;
}

void RowFft::forward(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
  const double scale = 1.0 / static_cast<double>(n_);
  const std::size_t total = rows_ * modes();
  for (std::size_t i = 0; i < total; ++i) out[i] *= scale;
}

void RowFft::backward(cplx* in, double* out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(bwd_), reinterpret_cast<fftw_complex*>(in), out);
}

}  // namespace aeex
