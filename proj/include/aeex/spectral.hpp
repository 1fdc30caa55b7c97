#pragma once

#include <vector>

#include "aeex/fft.hpp"
#include "aeex/grid.hpp"

namespace aeex {

/// Moves grid data between the physical layout (r outer, theta inner) and
/// mode lines (mode outer, r inner), the layout of the radial solves.
class ModeLines {
 public:
  explicit ModeLines(const MappedGrid& g);

  std::size_t n() const { return n_; }
  std::size_t modes() const { return m_; }
  std::size_t size() const { return n_ * m_; }

  std::vector<cplx> to_lines(const double* phys) const;
  void to_lines(const double* phys, cplx* lines) const;
  std::vector<double> to_phys(const cplx* lines) const;
  void to_phys(const cplx* lines, double* phys) const;

 private:
  std::size_t n_, nt_, m_;
  RowFft fft_;
};

}  // namespace aeex
