#pragma once

#include <functional>

#include "aeex/elliptic.hpp"

namespace aeex {

struct SupportEstimate {
  double radius = 0.0;     // max |x| over nodes with |q| > threshold
  double threshold = 0.0;
};

/// Physical velocity as a function of position.
using VelocityFn = std::function<Vec2(Vec2)>;

/// Foot of the characteristic through x traced backward over dt with RK4 in
/// log-polar mapped coordinates. A trace leaving 1 <= |T| <= r_max is clamped
/// to the boundary and reported through `clamped`.
Vec2 trace_characteristic(const VelocityField& field, Vec2 x, double dt, bool* clamped = nullptr);
Vec2 trace_characteristic(const MappedGrid& grid, const VelocityFn& u, Vec2 x, double dt,
                          bool* clamped = nullptr);

/// Range used to clip the bicubic value at a foot. `cell` clips to the four
/// corners of the containing cell; `global` clips to the range of the input
/// field. Both keep min q <= q_new <= max q exactly.
enum class Limiter { cell, global };

struct AdvectOptions {
  double cfl_limit = 0.5;
  Limiter limiter = Limiter::cell;
};

struct AdvectStats {
  double courant = 0.0;        // max over nodes of dt * |mapped velocity| / spacing
  std::size_t clamped = 0;     // feet clamped onto the truncation radius or boundary
};

/// One semi-Lagrangian step q_new(x) = q(foot(x)) for a steady field.
/// Throws StepSizeError when the Courant number exceeds `cfl_limit`.
ScalarField advect(const ScalarField& q, const VelocityField& field, double dt,
                   const AdvectOptions& opt = {}, AdvectStats* stats = nullptr);

/// Same, with the velocity varying linearly in time from `start` (old level)
/// to `end` (new level) across the step.
ScalarField advect(const ScalarField& q, const VelocityField& start, const VelocityField& end,
                   double dt, const AdvectOptions& opt = {}, AdvectStats* stats = nullptr);

/// threshold < 0 selects the default 1e-10 * max|q|.
SupportEstimate support_radius(const ScalarField& q, double threshold = -1.0);

}  // namespace aeex
