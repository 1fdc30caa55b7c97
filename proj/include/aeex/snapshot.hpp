#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aeex/grid.hpp"

namespace aeex {

/// Binary field snapshot. All fields little-endian.
///
///   offset  size  field
///        0     8  magic "AEEX0001"
///        8     8  n_r      (uint64)
///       16     8  n_theta  (uint64)
///       24     8  r_max    (float64)
///       32     8  alpha    (float64)
///       40     8  time     (float64)
///       48     8  quantity tag (uint64: 0 q, 1 psi, 2 phi, 3 omega)
///       56     8  reserved, zero
///       64       n_r * n_theta float64 values, r outer, theta inner
struct SnapshotHeader {
  std::uint64_t n_r = 0;
  std::uint64_t n_theta = 0;
  double r_max = 0.0;
  double alpha = 0.0;
  double time = 0.0;
  QuantityTag tag = QuantityTag::q;
};

struct Snapshot {
  SnapshotHeader header;
  std::vector<double> values;
};

inline constexpr std::size_t snapshot_header_bytes = 64;

void write_snapshot(const std::string& path, const ScalarField& f, double alpha, double time);
Snapshot read_snapshot(const std::string& path);
/// Rebuilds a field on `grid`; throws ValidationError on a shape mismatch.
ScalarField snapshot_field(const Snapshot& snap, const GridPtr& grid);

}  // namespace aeex
