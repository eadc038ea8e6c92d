#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace beurling {

/// Geometric evaluation schedule x_j = x0 * ratio^j, j = 0..count-1.
/// Requirements: x0 > 0, ratio > 1, count >= 5, top point finite.
struct XSchedule {
  double x0 = 1e2;
  double ratio = 2.0;
  int count = 20;

  std::vector<double> points() const;
  void validate() const;

  static XSchedule defaults() { return {}; }
};

/// Uniform grid for the compact parameter; must straddle and contain 0 so
/// that the identity value of ratio fields is sampled exactly. The grid point
/// nearest zero is snapped to exactly 0.
struct TGrid {
  double lo = -2.0;
  double hi = 2.0;
  double step = 0.1;

  std::vector<double> points() const;
  void validate() const;

  static TGrid defaults() { return {}; }
  static TGrid symmetric(double half_width, double step) {
    return {-half_width, half_width, step};
  }
};

enum class Verdict { pass, fail, inconclusive };

const char* verdict_name(Verdict v);

/// Outcome of a deviation scan along a schedule.
///
/// per_x holds (x_j, sup deviation over the compact) for every schedule point
/// with at least one usable evaluation; skipped_per_x counts evaluations at
/// that x which raised EvalError. Verdict pass requires: final deviation <=
/// tolerance and deviations non-increasing over the final 5 retained points;
/// when more than 5% of all evaluations were skipped the verdict is
/// inconclusive regardless.
struct ConvergenceReport {
  std::vector<std::pair<double, double>> per_x;
  std::vector<std::size_t> skipped_per_x;
  double extrapolated_limit = 0.0;
  double decay_exponent = 0.0;
  Verdict verdict = Verdict::inconclusive;
  double tolerance = 0.0;
  std::size_t n_evaluations = 0;
  std::size_t n_skipped = 0;
  std::string note;

  double last_deviation() const { return per_x.empty() ? 0.0 : per_x.back().second; }
};

/// Accelerated limit of samples (x_j, v_j), x strictly increasing, at least
/// three of them: one Richardson step assuming v_j = L + C x_j^{-p}, with the
/// decay fitted from the last three samples. Falls back to the final sample
/// when the fit is degenerate (non-decaying or stalled differences).
double extrapolate_limit(const std::vector<std::pair<double, double>>& samples);

/// Least-squares slope of log(deviation) against log(x) over the second half
/// of the retained points (only positive deviations enter). Zero when fewer
/// than two usable points exist.
double fit_decay_exponent(const std::vector<std::pair<double, double>>& per_x);

/// Scans deviation(t, x) = |field(t, x) - target(t)| over grid x schedule.
/// Evaluations raising EvalError are skipped and counted; everything else
/// propagates. Rows where every t failed are dropped entirely.
ConvergenceReport sup_deviation_profile(
    const std::function<double(double, double)>& field,
    const std::function<double(double)>& target, const TGrid& grid,
    const XSchedule& schedule, double tol);

/// Same scan for a field that already is a deviation (target 0 pointwise).
ConvergenceReport sup_abs_profile(const std::function<double(double, double)>& deviation,
                                  const TGrid& grid, const XSchedule& schedule, double tol);

/// Assembles a report from per-x deviations that were computed elsewhere
/// (single-sample-per-x checks). skipped holds per-x skip counts aligned with
/// deviations; dropped counts schedule points with no usable value at all.
ConvergenceReport make_report(std::vector<std::pair<double, double>> per_x,
                              std::vector<std::size_t> skipped, std::size_t n_evaluations,
                              std::size_t n_skipped, double tol);

}  // namespace beurling
