#pragma once

#include <string>

#include "beurling/asymptotics.hpp"
#include "beurling/real_func.hpp"

namespace beurling {

/// Verdict wrapper shared by the variation checks: which check ran, on what,
/// and the deviation profile backing the verdict.
struct VariationVerdict {
  std::string check;          // "self-neglect", "slow-variation", ...
  std::string subject;        // label of the function under test
  std::string rate;           // label of the rate used (empty when subject is its own rate)
  ConvergenceReport report;
  double min_rate_on_schedule = 0.0;  // smallest rate value seen (reported, not asserted)

  bool passed() const { return report.verdict == Verdict::pass; }
};

/// Self-neglect check: phi(x + t phi(x)) / phi(x) -> 1 uniformly on the
/// compact grid. phi must be positive along the schedule (checked during
/// evaluation; violations raise EvalError::nonpositive).
VariationVerdict check_sn(const RealFunc& phi, const TGrid& grid, const XSchedule& schedule,
                          double tol = 1e-2);

/// Slow variation of psi along the rate phi:
/// psi(x + t phi(x)) / psi(x) -> 1 on the compact grid.
VariationVerdict check_phi_slow(const RealFunc& psi, const RealFunc& phi, const TGrid& grid,
                                const XSchedule& schedule, double tol = 1e-2);

/// Additive-argument slow variation: phi(x + v) / phi(x) -> 1 for v in the
/// grid. The hypothesis that phi is bounded below along the schedule is
/// measured and reported in min_rate_on_schedule, not asserted.
VariationVerdict check_karamata_additive(const RealFunc& phi, const TGrid& grid,
                                         const XSchedule& schedule, double tol = 1e-2);

/// phi(x) = o(x): the profile of phi(x_j)/x_j against 0 along the schedule.
VariationVerdict check_little_o(const RealFunc& phi, const XSchedule& schedule,
                                double tol = 1e-2);

}  // namespace beurling
