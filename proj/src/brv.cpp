#include "beurling/brv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beurling/errors.hpp"
#include "beurling/parallel.hpp"

namespace beurling {

RatioField::RatioField(RealFunc f, RealFunc phi)
    : f_(std::move(f)), phi_(std::move(phi)), exact_log_(f_.has_exact_log()) {}

double RatioField::log_ratio(double t, double x) const {
  if (t == 0.0) return 0.0;
  double y = x + t * phi_(x);
  if (exact_log_) return f_.log_value(y) - f_.log_value(x);
  double fx = f_(x);
  double fy = f_(y);
  if (!(fx > 0.0) || !(fy > 0.0))
    throw EvalError(EvalError::Kind::nonpositive, "ratio field needs positive values", x);
  return std::log(fy) - std::log(fx);
}

double RatioField::operator()(double t, double x) const {
  if (t == 0.0) return 1.0;
  if (exact_log_) {
    double r = std::exp(log_ratio(t, x));
    if (!std::isfinite(r))
      throw EvalError(EvalError::Kind::nonfinite, "ratio overflow", x);
    return r;
  }
  double fx = f_(x);
  double r = f_(x + t * phi_(x)) / fx;
  if (!std::isfinite(r)) throw EvalError(EvalError::Kind::nonfinite, "ratio not finite", x);
  return r;
}

double limit_g(const RealFunc& f, const RealFunc& phi, double t, const XSchedule& schedule) {
  RatioField sigma(f, phi);
  std::vector<std::pair<double, double>> samples;
  std::size_t skipped = 0;
  for (double x : schedule.points()) {
    try {
      samples.emplace_back(x, sigma(t, x));
    } catch (const EvalError&) {
      ++skipped;
    }
  }
  if (samples.empty())
    throw NumericError("limit: every schedule point was skipped at t = " + format_double(t));
  if (samples.size() < 3)
    throw NumericError("limit: fewer than 3 usable schedule points at t = " + format_double(t));
  return extrapolate_limit(samples);
}

IndexEstimate estimate_index(const RealFunc& f, const RealFunc& phi, const TGrid& grid,
                             const XSchedule& schedule) {
  std::vector<double> ts = grid.points();
  if (ts.size() < 10) throw ValidationError("index estimation needs a grid of >= 10 points");
  schedule.validate();

  IndexEstimate est;
  est.k_samples.resize(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    double g = limit_g(f, phi, ts[i], schedule);
    if (!(g > 1e-12))
      throw NumericError("extrapolated limit not strictly positive at t = " +
                         format_double(ts[i]) + " (flagged, not repaired)");
    est.k_samples[i] = {ts[i], ts[i] == 0.0 ? 0.0 : std::log(g)};
  });

  double num = 0.0, den = 0.0;
  for (auto [t, k] : est.k_samples) {
    num += t * k;
    den += t * t;
  }
  if (den == 0.0) throw ValidationError("grid has no spread in t");
  est.rho = num / den;

  for (auto [t, k] : est.k_samples)
    est.fit_residual = std::max(est.fit_residual, std::fabs(k - est.rho * t));

  // additive defect over pairs whose sum is itself a grid point
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < ts.size(); ++i) step = std::min(step, ts[i] - ts[i - 1]);
  auto lookup = [&](double t) -> const double* {
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    double best = std::numeric_limits<double>::infinity();
    std::size_t idx = ts.size();
    if (it != ts.end() && std::fabs(*it - t) < best) {
      best = std::fabs(*it - t);
      idx = static_cast<std::size_t>(it - ts.begin());
    }
    if (it != ts.begin() && std::fabs(*(it - 1) - t) < best) {
      best = std::fabs(*(it - 1) - t);
      idx = static_cast<std::size_t>(it - 1 - ts.begin());
    }
    if (idx == ts.size() || best > 0.25 * step) return nullptr;
    return &est.k_samples[idx].second;
  };
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = i; j < ts.size(); ++j) {
      const double* ksum = lookup(ts[i] + ts[j]);
      if (ksum == nullptr) continue;
      double r = std::fabs(*ksum - est.k_samples[i].second - est.k_samples[j].second);
      est.cfe_max_residual = std::max(est.cfe_max_residual, r);
    }
  }
  return est;
}

ConvergenceReport uct_profile(const RealFunc& f, const RealFunc& phi, double rho,
                              const TGrid& grid, const XSchedule& schedule, double tol) {
  RatioField sigma(f, phi);
  auto deviation = [&sigma, rho](double t, double x) {
    return std::fabs(std::expm1(sigma.log_ratio(t, x) - rho * t));
  };
  return sup_abs_profile(deviation, grid, schedule, tol);
}

double cocycle_defect(const RatioField& sigma, double s, double t, double x) {
  double shifted = x + t * sigma.rate()(x);
  return std::fabs(sigma(s + t, x) - sigma(s, shifted) * sigma(t, x));
}

ConvergenceReport cocycle_defect_profile(const RealFunc& f, const RealFunc& phi,
                                         const TGrid& grid, const XSchedule& schedule,
                                         double tol) {
  RatioField sigma(f, phi);
  std::vector<double> ss = grid.points();
  auto deviation = [&sigma, &ss](double t, double x) {
    double worst = 0.0;
    for (double s : ss) worst = std::max(worst, cocycle_defect(sigma, s, t, x));
    return worst;
  };
  return sup_abs_profile(deviation, grid, schedule, tol);
}

double cfe_residual(const std::vector<std::pair<double, double>>& k_samples, double s, double t) {
  if (k_samples.size() < 3) throw ValidationError("additive defect needs tabulated k samples");
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < k_samples.size(); ++i)
    spacing = std::min(spacing, k_samples[i].first - k_samples[i - 1].first);
  auto at = [&](double t0) {
    const std::pair<double, double>* best = nullptr;
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& kv : k_samples) {
      double d = std::fabs(kv.first - t0);
      if (d < dist) {
        dist = d;
        best = &kv;
      }
    }
    if (best == nullptr || dist > 0.5 * spacing + 1e-12)
      throw ValidationError("requested point " + format_double(t0) +
                            " lies off the tabulated grid");
    return best->second;
  };
  return std::fabs(at(s + t) - at(s) - at(t));
}

ShiftUniformity shift_uniformity(const RealFunc& f, const RealFunc& phi, double rho, double u,
                                 const XSchedule& schedule, double window, double step,
                                 double tol) {
  if (!(window > 0.0)) throw ValidationError("shift window must be positive");
  TGrid local = TGrid::symmetric(window, std::min(step, window / 2.0));

  RatioField sigma(f, phi);
  auto dev_at = [&sigma, rho](double t, double x) {
    return std::fabs(std::expm1(sigma.log_ratio(t, x) - rho * t));
  };

  ShiftUniformity out;
  out.near_zero = sup_abs_profile(dev_at, local, schedule, tol);
  auto dev_shifted = [&dev_at, &phi, u](double t, double x) {
    return dev_at(t, x + u * phi(x));
  };
  out.near_shift = sup_abs_profile(dev_shifted, local, schedule, tol);
  out.verdicts_differ = out.near_zero.verdict != out.near_shift.verdict;
  return out;
}

}  // namespace beurling
