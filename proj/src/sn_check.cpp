#include "beurling/sn_check.hpp"

#include <cmath>
#include <limits>

#include "beurling/errors.hpp"

namespace beurling {

namespace {

double positive_value(const RealFunc& f, double x) {
  double v = f(x);
  if (!(v > 0.0))
    throw EvalError(EvalError::Kind::nonpositive,
                    f.label() + ": positivity violation at " + format_double(x), x);
  return v;
}

double min_on_schedule(const RealFunc& f, const XSchedule& schedule) {
  double lo = std::numeric_limits<double>::infinity();
  for (double x : schedule.points()) {
    try {
      lo = std::min(lo, f(x));
    } catch (const EvalError&) {
      // unreadable points contribute nothing; the profile scan records them
    }
  }
  return std::isfinite(lo) ? lo : 0.0;
}

}  // namespace

VariationVerdict check_sn(const RealFunc& phi, const TGrid& grid, const XSchedule& schedule,
                          double tol) {
  VariationVerdict v;
  v.check = "self-neglect";
  v.subject = phi.label();
  auto field = [&phi](double t, double x) {
    double px = positive_value(phi, x);
    if (t == 0.0) return 1.0;
    return positive_value(phi, x + t * px) / px;
  };
  v.report = sup_deviation_profile(field, [](double) { return 1.0; }, grid, schedule, tol);
  v.min_rate_on_schedule = min_on_schedule(phi, schedule);
  return v;
}

VariationVerdict check_phi_slow(const RealFunc& psi, const RealFunc& phi, const TGrid& grid,
                                const XSchedule& schedule, double tol) {
  VariationVerdict v;
  v.check = "slow-variation";
  v.subject = psi.label();
  v.rate = phi.label();
  auto field = [&psi, &phi](double t, double x) {
    double sx = positive_value(psi, x);
    if (t == 0.0) return 1.0;
    return positive_value(psi, x + t * positive_value(phi, x)) / sx;
  };
  v.report = sup_deviation_profile(field, [](double) { return 1.0; }, grid, schedule, tol);
  v.min_rate_on_schedule = min_on_schedule(phi, schedule);
  return v;
}

VariationVerdict check_karamata_additive(const RealFunc& phi, const TGrid& grid,
                                         const XSchedule& schedule, double tol) {
  VariationVerdict v;
  v.check = "additive-slow-variation";
  v.subject = phi.label();
  auto field = [&phi](double t, double x) {
    double px = positive_value(phi, x);
    if (t == 0.0) return 1.0;
    return positive_value(phi, x + t) / px;
  };
  v.report = sup_deviation_profile(field, [](double) { return 1.0; }, grid, schedule, tol);
  v.min_rate_on_schedule = min_on_schedule(phi, schedule);
  return v;
}

VariationVerdict check_little_o(const RealFunc& phi, const XSchedule& schedule, double tol) {
  VariationVerdict v;
  v.check = "little-o";
  v.subject = phi.label();

  std::vector<std::pair<double, double>> per_x;
  std::vector<std::size_t> skipped;
  std::size_t evals = 0, skips = 0;
  for (double x : schedule.points()) {
    ++evals;
    try {
      per_x.emplace_back(x, std::fabs(positive_value(phi, x) / x));
      skipped.push_back(0);
    } catch (const EvalError&) {
      ++skips;
    }
  }
  v.report = make_report(std::move(per_x), std::move(skipped), evals, skips, tol);
  v.min_rate_on_schedule = min_on_schedule(phi, schedule);
  return v;
}

}  // namespace beurling
