#include "beurling/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beurling/errors.hpp"
#include "beurling/expr.hpp"
#include "beurling/parallel.hpp"

namespace beurling {

void XSchedule::validate() const {
  if (!(x0 > 0.0) || !std::isfinite(x0)) throw ValidationError("schedule needs x0 > 0");
  if (!(ratio > 1.0) || !std::isfinite(ratio)) throw ValidationError("schedule needs ratio > 1");
  if (count < 5) throw ValidationError("schedule needs count >= 5");
  double top = x0 * std::pow(ratio, count - 1);
  if (!std::isfinite(top)) throw ValidationError("schedule top point overflows");
}

std::vector<double> XSchedule::points() const {
  validate();
  std::vector<double> xs(static_cast<std::size_t>(count));
  double x = x0;
  for (int j = 0; j < count; ++j) {
    xs[static_cast<std::size_t>(j)] = x;
    x *= ratio;
  }
  return xs;
}

void TGrid::validate() const {
  if (!(lo < hi)) throw ValidationError("grid needs lo < hi");
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("grid needs step > 0");
  double span = (hi - lo) / step;
  if (!(span < 1e7)) throw ValidationError("grid has too many points");
  double k0 = std::round(-lo / step);
  if (std::fabs(lo + k0 * step) > 1e-9 * std::max(1.0, std::fabs(lo)) || k0 < 0.0 ||
      lo + k0 * step > hi + 0.5 * step)
    throw ValidationError("grid must contain 0");
}

std::vector<double> TGrid::points() const {
  validate();
  auto n = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
  std::size_t zero_index = static_cast<std::size_t>(std::llround(-lo / step));
  std::vector<double> ts(n);
  for (std::size_t k = 0; k < n; ++k) ts[k] = lo + static_cast<double>(k) * step;
  if (zero_index < n) ts[zero_index] = 0.0;  // sample the identity exactly
  if (ts.back() > hi + 0.5 * step) ts.pop_back();
  return ts;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double extrapolate_limit(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw ValidationError("extrapolation needs at least 3 samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].first > samples[i - 1].first))
      throw ValidationError("extrapolation needs strictly increasing x");

  double v1 = samples[samples.size() - 3].second;
  double v2 = samples[samples.size() - 2].second;
  double v3 = samples[samples.size() - 1].second;
  double d1 = v2 - v1;
  double d2 = v3 - v2;
  if (d1 == 0.0 || d2 == 0.0) return v3;  // already stationary
  double q = d2 / d1;
  if (!(q > 0.0) || !(q < 1.0)) return v3;  // not a decaying power law
  return v3 + d2 * q / (1.0 - q);
}

double fit_decay_exponent(const std::vector<std::pair<double, double>>& per_x) {
  // log-log least squares over the trailing half of the retained points
  std::size_t n = per_x.size();
  if (n < 2) return 0.0;
  std::size_t start = n - std::max<std::size_t>(2, (n + 1) / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = start; i < n; ++i) {
    auto [x, d] = per_x[i];
    if (!(d > 0.0) || !(x > 0.0)) continue;
    double lx = std::log(x), ld = std::log(d);
    sx += lx;
    sy += ld;
    sxx += lx * lx;
    sxy += lx * ld;
    ++m;
  }
  if (m < 2) return 0.0;
  double denom = static_cast<double>(m) * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

ConvergenceReport make_report(std::vector<std::pair<double, double>> per_x,
                              std::vector<std::size_t> skipped, std::size_t n_evaluations,
                              std::size_t n_skipped, double tol) {
  ConvergenceReport rep;
  rep.per_x = std::move(per_x);
  rep.skipped_per_x = std::move(skipped);
  rep.n_evaluations = n_evaluations;
  rep.n_skipped = n_skipped;
  rep.tolerance = tol;

  if (rep.per_x.empty()) {
    rep.verdict = Verdict::inconclusive;
    rep.note = "no usable evaluations";
    return rep;
  }

  rep.extrapolated_limit =
      rep.per_x.size() >= 3 ? extrapolate_limit(rep.per_x) : rep.per_x.back().second;
  rep.decay_exponent = fit_decay_exponent(rep.per_x);

  double skip_ratio =
      n_evaluations == 0 ? 0.0 : static_cast<double>(n_skipped) / static_cast<double>(n_evaluations);
  if (skip_ratio > 0.05) {
    rep.verdict = Verdict::inconclusive;
    rep.note = "skipped " + format_double(100.0 * skip_ratio) + "% of evaluations";
    return rep;
  }

  // Pass: converged below tolerance and not rebounding over the tail.
  // Wiggles far below the tolerance (rounding-floor deviations) carry no
  // trend information and do not count as rebounds.
  std::size_t n = rep.per_x.size();
  std::size_t tail = std::min<std::size_t>(5, n);
  bool monotone = true;
  for (std::size_t i = n - tail; i + 1 < n; ++i) {
    double a = rep.per_x[i].second, b = rep.per_x[i + 1].second;
    if (b > a * (1.0 + 1e-9) + 1e-6 * tol) {
      monotone = false;
      break;
    }
  }
  bool below = rep.per_x.back().second <= tol;
  rep.verdict = (below && monotone) ? Verdict::pass : Verdict::fail;
  if (!below)
    rep.note = "final deviation above tolerance";
  else if (!monotone)
    rep.note = "deviations rebound over the final points";
  if (std::fabs(rep.decay_exponent) < 0.1 && rep.verdict == Verdict::pass &&
      rep.per_x.back().second > 0.0)
    rep.note = rep.note.empty() ? "slow decay" : rep.note + "; slow decay";
  return rep;
}

namespace {

struct Row {
  double sup = 0.0;
  std::size_t skipped = 0;
  std::size_t evaluated = 0;
  bool usable = false;
};

ConvergenceReport scan(const std::function<double(double, double)>& deviation, const TGrid& grid,
                       const XSchedule& schedule, double tol) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  std::vector<double> ts = grid.points();
  std::vector<double> xs = schedule.points();

  std::vector<Row> rows(xs.size());
  parallel_for(xs.size(), [&](std::size_t j) {
    Row& row = rows[j];
    for (double t : ts) {
      ++row.evaluated;
      double d;
      try {
        d = std::fabs(deviation(t, xs[j]));
      } catch (const EvalError&) {
        ++row.skipped;
        continue;
      }
      if (!std::isfinite(d)) {
        ++row.skipped;
        continue;
      }
      row.usable = true;
      row.sup = std::max(row.sup, d);
    }
  });

  std::vector<std::pair<double, double>> per_x;
  std::vector<std::size_t> skipped;
  std::size_t total_evals = 0, total_skips = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    total_evals += rows[j].evaluated;
    total_skips += rows[j].skipped;
    if (rows[j].usable) {
      per_x.emplace_back(xs[j], rows[j].sup);
      skipped.push_back(rows[j].skipped);
    }
  }
  return make_report(std::move(per_x), std::move(skipped), total_evals, total_skips, tol);
}

}  // namespace

ConvergenceReport sup_deviation_profile(const std::function<double(double, double)>& field,
                                        const std::function<double(double)>& target,
                                        const TGrid& grid, const XSchedule& schedule, double tol) {
  auto deviation = [&field, &target](double t, double x) { return field(t, x) - target(t); };
  return scan(deviation, grid, schedule, tol);
}

ConvergenceReport sup_abs_profile(const std::function<double(double, double)>& deviation,
                                  const TGrid& grid, const XSchedule& schedule, double tol) {
  return scan(deviation, grid, schedule, tol);
}

}  // namespace beurling
