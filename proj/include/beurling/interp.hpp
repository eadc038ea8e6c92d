#pragma once

#include <cstddef>
#include <vector>

#include "beurling/asymptotics.hpp"
#include "beurling/real_func.hpp"

namespace beurling {

/// Self-similar partition driven by a rate function:
///   x_{n+1} = x_n + phi(x_n), seeded at x_1 and with 0 prepended as x_0.
/// Generation stops at the horizon, when the increment stagnates below
/// eps * max(1, x_n), or at max_knots; `diverged` records whether the horizon
/// was actually reached.
struct BloomPartition {
  std::vector<double> knots;  // knots[0] == 0, knots[1] == x1
  bool diverged = false;      // horizon reached before any other stop
  std::size_t max_knots = 0;
};

BloomPartition bloom_partition(const RealFunc& phi, double x1, double horizon,
                               std::size_t max_knots = 1u << 20);

/// C^1 monotone-in-cell interpolant through (knots[i], values[i]) using the
/// cubic blend s(theta) = 3 theta^2 - 2 theta^3 on each cell. Knot values are
/// reproduced exactly, the derivative vanishes at every knot, and the function
/// extends as a constant beyond either end.
class InterpolantC1 {
 public:
  InterpolantC1(std::vector<double> knots, std::vector<double> values);

  double operator()(double x) const;
  double derivative(double x) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

  /// Max over cells of sup |interpolant'| * cell_width / |value jump|.
  /// The blend keeps this at exactly 3/2 on every non-degenerate cell.
  double slope_constant() const;

  /// Wraps the interpolant as a positive evaluable function (requires all
  /// knot values > 0).
  RealFunc as_real_func(const std::string& label) const;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Samples phi at the partition knots (knot 0 excluded) and interpolates.
InterpolantC1 interpolate_c1(const RealFunc& phi, const BloomPartition& partition);

/// Asymptotic agreement between a rate and its partition interpolant, sampled
/// at displaced points y = x + t*phi(x): `ratio` profiles phi_hat(y)/phi(y)
/// against 1, `derivative_term` profiles phi(y) * phi_hat'(y) / phi_hat(y)
/// (the correction exponent of the smoothed representation) against 0. Both
/// use the same grid/schedule/tolerance.
struct SmoothRepCheck {
  ConvergenceReport ratio;
  ConvergenceReport derivative_term;
};

SmoothRepCheck smooth_rep_check(const RealFunc& phi, const InterpolantC1& phi_hat,
                                const TGrid& grid, const XSchedule& schedule, double tol = 1e-2);

}  // namespace beurling
