#include "aeex/spectral.hpp"

namespace aeex {

ModeLines::ModeLines(const MappedGrid& g)
    : n_(g.n_r()), nt_(g.n_theta()), m_(g.modes()), fft_(g.n_r(), g.n_theta()) {}

std::vector<cplx> ModeLines::to_lines(const double* phys) const {
  std::vector<cplx> out(size());
  to_lines(phys, out.data());
  return out;
}

void ModeLines::to_lines(const double* phys, cplx* lines) const {
  std::vector<cplx> c(n_ * m_);
  fft_.forward(phys, c.data());
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < m_; ++k) lines[k * n_ + i] = c[i * m_ + k];
}

std::vector<double> ModeLines::to_phys(const cplx* lines) const {
  std::vector<double> out(n_ * nt_);
  to_phys(lines, out.data());
  return out;
}

void ModeLines::to_phys(const cplx* lines, double* phys) const {
  std::vector<cplx> c(n_ * m_);
  for (std::size_t k = 0; k < m_; ++k)
    for (std::size_t i = 0; i < n_; ++i) c[i * m_ + k] = lines[k * n_ + i];
  fft_.backward(c.data(), phys);
}

}  // namespace aeex
