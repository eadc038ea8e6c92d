#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "beurling/asymptotics.hpp"
#include "beurling/real_func.hpp"

namespace beurling {

/// The two-parameter ratio field sigma(t, x) = f(x + t phi(x)) / f(x).
/// sigma(0, x) == 1 exactly by construction. When f carries an exact
/// log-scale evaluation the ratio is formed as exp(log f(y) - log f(x)),
/// which stays finite far beyond the overflow point of f.
class RatioField {
 public:
  RatioField(RealFunc f, RealFunc phi);

  double operator()(double t, double x) const;

  /// log sigma(t, x); exact 0 at t = 0.
  double log_ratio(double t, double x) const;

  const RealFunc& f() const { return f_; }
  const RealFunc& rate() const { return phi_; }

 private:
  RealFunc f_, phi_;
  bool exact_log_;
};

/// Accelerated limit of sigma(t, x_j) along the schedule. Schedule points
/// where the ratio cannot be evaluated (domain exits, overflow) are skipped;
/// fewer than three usable samples is an error.
double limit_g(const RealFunc& f, const RealFunc& phi, double t, const XSchedule& schedule);

/// Result of fitting the limit exponent: sigma(t, x) -> e^{rho t}.
///
/// k_samples holds (t, k(t)) with k(t) = log limit_g(t) over the grid;
/// rho is the least-squares slope of k through the origin; fit_residual is
/// max |k(t) - rho t|; cfe_max_residual is the largest additive defect
/// |k(s+t) - k(s) - k(t)| over grid pairs whose sum lies on the grid.
struct IndexEstimate {
  double rho = 0.0;
  double fit_residual = 0.0;
  double cfe_max_residual = 0.0;
  std::vector<std::pair<double, double>> k_samples;
};

/// Estimates the variation index of f along phi over a compact grid with at
/// least 10 points. Errors when some extrapolated limit is not strictly
/// positive (mixed-sign or vanishing limits are flagged, not repaired).
IndexEstimate estimate_index(const RealFunc& f, const RealFunc& phi, const TGrid& grid,
                             const XSchedule& schedule);

/// Uniform-convergence profile: sup_t |sigma(t, x) e^{-rho t} - 1| along the
/// schedule. The normalised form measures relative distance to the limit
/// e^{rho t}, so passes and tolerances are scale-free in t.
ConvergenceReport uct_profile(const RealFunc& f, const RealFunc& phi, double rho,
                              const TGrid& grid, const XSchedule& schedule, double tol = 1e-2);

/// Pointwise asymptotic-cocycle defect
///   |sigma(s+t, x) - sigma(s, x + t phi(x)) * sigma(t, x)|.
double cocycle_defect(const RatioField& sigma, double s, double t, double x);

/// Profile of the sup defect over (s, t) in grid x grid along the schedule.
ConvergenceReport cocycle_defect_profile(const RealFunc& f, const RealFunc& phi,
                                         const TGrid& grid, const XSchedule& schedule,
                                         double tol = 1e-2);

/// Additive defect |k(s+t) - k(s) - k(t)| looked up from tabulated k samples
/// by nearest grid point; requests farther than half the grid spacing from
/// any sample are errors.
double cfe_residual(const std::vector<std::pair<double, double>>& k_samples, double s, double t);

/// Compares convergence toward e^{rho t} near t = 0 with convergence near
/// t = u: the near-u profile evaluates the same normalised field at the
/// shifted base points y_j = x_j + u phi(x_j), which is how uniformity near a
/// working shift reduces to uniformity near the origin. verdicts_differ
/// flags disagreement between the two reports.
struct ShiftUniformity {
  ConvergenceReport near_zero;
  ConvergenceReport near_shift;
  bool verdicts_differ = false;
};

ShiftUniformity shift_uniformity(const RealFunc& f, const RealFunc& phi, double rho, double u,
                                 const XSchedule& schedule, double window, double step = 0.1,
                                 double tol = 1e-2);

}  // namespace beurling
