#include "beurling/represent.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "beurling/errors.hpp"
#include "beurling/flow.hpp"
#include "beurling/quadrature.hpp"

namespace beurling {

namespace {

// Memoised integral values shared by the closures of one representation.
// Keyed by the exact argument bits; closures capture the cache by shared_ptr
// so copies of the RealFunc keep sharing it.
struct IntegralCache {
  std::mutex m;
  std::unordered_map<double, double> memo;
};

template <class Compute>
double cached(IntegralCache& cache, double x, Compute&& compute) {
  {
    std::lock_guard lock(cache.m);
    auto it = cache.memo.find(x);
    if (it != cache.memo.end()) return it->second;
  }
  const double v = compute(x);
  std::lock_guard lock(cache.m);
  cache.memo.emplace(x, v);
  return v;
}

Domain intersect(const Domain& a, const Domain& b) {
  Domain r;
  if (a.lo > b.lo) {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed;
  } else if (b.lo > a.lo) {
    r.lo = b.lo;
    r.lo_closed = b.lo_closed;
  } else {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed && b.lo_closed;
  }
  r.hi = std::min(a.hi, b.hi);
  return r;
}

// Piecewise-linear profile with constant extension beyond both ends and an
// exact running integral anchored at the origin.
struct Polyline {
  std::vector<double> xs;   // strictly increasing, xs.front() > 0
  std::vector<double> ys;
  std::vector<double> cum;  // cum[i] = integral over [xs[0], xs[i]]

  void finish() {
    cum.assign(xs.size(), 0.0);
    for (std::size_t i = 1; i < xs.size(); ++i)
      cum[i] = cum[i - 1] + 0.5 * (ys[i - 1] + ys[i]) * (xs[i] - xs[i - 1]);
  }

  std::size_t cell(double x) const {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    return static_cast<std::size_t>(it - xs.begin()) - 1;  // xs[i] <= x < xs[i+1]
  }

  double eval(double x) const {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const std::size_t i = cell(x);
    const double th = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + th * (ys[i + 1] - ys[i]);
  }

  double integral_from_zero(double x) const {
    if (x <= xs.front()) return ys.front() * x;
    const double head = ys.front() * xs.front();
    if (x >= xs.back()) return head + cum.back() + ys.back() * (x - xs.back());
    const std::size_t i = cell(x);
    return head + cum[i] + 0.5 * (ys[i] + eval(x)) * (x - xs[i]);
  }
};

double checked_positive_rate(const RealFunc& phi, double u) {
  const double p = phi(u);
  if (!(p > 0.0))
    throw EvalError(EvalError::Kind::nonpositive, "rate must be positive, got " + format_double(p),
                    u);
  return p;
}

}  // namespace

RealFunc polyline_func(const std::vector<std::pair<double, double>>& table, bool log_scale,
                       std::string label) {
  if (table.empty()) throw ValidationError("polyline table must not be empty");
  Polyline prof;
  prof.xs.reserve(table.size());
  prof.ys.reserve(table.size());
  for (const auto& [x, y] : table) {
    if (!std::isfinite(x) || !std::isfinite(y))
      throw ValidationError("polyline table entries must be finite");
    if (!prof.xs.empty() && !(x > prof.xs.back()))
      throw ValidationError("polyline table abscissae must be strictly increasing");
    prof.xs.push_back(x);
    prof.ys.push_back(y);
  }
  prof.finish();

  RealFunc::ClosureSpec spec;
  spec.domain.lo = 0.0;
  spec.domain.lo_closed = true;
  if (log_scale) {
    spec.fn = [prof](double x) { return std::exp(prof.eval(x)); };
    spec.log_fn = [prof](double x) { return prof.eval(x); };
    spec.positive = true;
  } else {
    spec.fn = [prof](double x) { return prof.eval(x); };
    spec.integral = [prof](double x) { return prof.integral_from_zero(x); };
  }
  return RealFunc::from_closure(std::move(label), std::move(spec));
}

RealFunc make_f_rho(double rho, const RealFunc& phi, double quad_tol) {
  if (!std::isfinite(rho)) throw ValidationError("index rho must be finite");
  if (!phi.valid()) throw ValidationError("rate function required");
  if (!(quad_tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");

  auto cache = std::make_shared<IntegralCache>();
  RealFunc rate = phi;
  auto log_fn = [cache, rate, rho, quad_tol](double x) {
    if (rho == 0.0) return 0.0;
    return rho * cached(*cache, x, [&](double u) { return time_measure(rate, u, quad_tol); });
  };

  RealFunc::ClosureSpec spec;
  spec.fn = [log_fn](double x) { return std::exp(log_fn(x)); };
  spec.log_fn = log_fn;
  spec.deriv = [log_fn, rate, rho](double x) {
    return rho * std::exp(log_fn(x)) / checked_positive_rate(rate, x);
  };
  spec.domain = phi.domain();
  spec.positive = true;
  return RealFunc::from_closure(
      "flow_exp(rho=" + format_double(rho) + "; " + phi.label() + ")", std::move(spec));
}

GammaRepresentation build_gamma(double rho, const RealFunc& phi, const RealFunc& d,
                                const RealFunc& e, double quad_tol) {
  if (!std::isfinite(rho)) throw ValidationError("index rho must be finite");
  if (!phi.valid() || !d.valid() || !e.valid())
    throw ValidationError("rate, constant and remainder components all required");
  if (!(quad_tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");

  GammaRepresentation rep;
  rep.rho = rho;
  rep.phi = phi;
  rep.d_component = d;

  // The remainder integral starts at the origin, so e must admit 0.
  Domain ed = e.domain();
  if (!ed.contains(0.0)) {
    ed.lo = 0.0;
    ed.lo_closed = true;
    rep.e_component = e.with_domain(ed);
  } else {
    rep.e_component = e;
  }

  auto tau_cache = std::make_shared<IntegralCache>();
  auto rem_cache = std::make_shared<IntegralCache>();
  RealFunc rate = phi;
  RealFunc dd = d;
  RealFunc ee = rep.e_component;

  auto log_fn = [tau_cache, rem_cache, rate, dd, ee, rho, quad_tol](double x) {
    const double dv = dd(x);
    if (!(dv > 0.0))
      throw EvalError(EvalError::Kind::nonpositive,
                      "constant component must be positive, got " + format_double(dv), x);
    double acc = std::log(dv);
    if (rho != 0.0)
      acc += rho * cached(*tau_cache, x, [&](double u) { return time_measure(rate, u, quad_tol); });
    if (ee.has_exact_integral()) {
      acc += ee.integral_from_zero(x);
    } else {
      acc += cached(*rem_cache, x, [&](double u) {
        return adaptive_simpson([&ee](double v) { return ee(v); }, 0.0, u, quad_tol);
      });
    }
    return acc;
  };

  Domain dom = intersect(intersect(phi.domain(), d.domain()), rep.e_component.domain());

  RealFunc::ClosureSpec spec;
  spec.fn = [log_fn](double x) { return std::exp(log_fn(x)); };
  spec.log_fn = log_fn;
  spec.domain = dom;
  spec.positive = true;
  rep.assembled = RealFunc::from_closure("gamma(d=" + d.label() + "; rho=" + format_double(rho) +
                                             "; phi=" + phi.label() + "; e=" + e.label() + ")",
                                         std::move(spec));
  return rep;
}

Decomposition decompose(const RealFunc& f, const RealFunc& phi, double rho, double quad_tol) {
  if (!std::isfinite(rho)) throw ValidationError("index rho must be finite");
  if (!f.valid() || !phi.valid()) throw ValidationError("function and rate required");
  if (!(quad_tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");

  auto cache = std::make_shared<IntegralCache>();
  RealFunc ff = f;
  RealFunc rate = phi;
  auto fn = [cache, ff, rate, rho, quad_tol](double x) {
    double h = ff.log_value(x);
    if (rho != 0.0)
      h -= rho * cached(*cache, x, [&](double u) { return time_measure(rate, u, quad_tol); });
    return h;
  };

  RealFunc::ClosureSpec spec;
  spec.fn = fn;
  spec.domain = intersect(f.domain(), phi.domain());
  spec.positive = false;

  Decomposition dec;
  dec.h_tilde = RealFunc::from_closure(
      "log(" + f.label() + ") - " + format_double(rho) + "*occupation(" + phi.label() + ")",
      std::move(spec));
  dec.rho = rho;
  dec.f = f;
  dec.phi = phi;
  dec.quad_tol = quad_tol;
  return dec;
}

GammaRepresentation extract_components(const Decomposition& dec, const BloomPartition& partition) {
  if (!dec.f.valid() || !dec.phi.valid() || !dec.h_tilde.valid())
    throw ValidationError("decomposition is incomplete");
  if (partition.knots.size() < 2 || partition.knots[0] != 0.0)
    throw ValidationError("partition must carry the origin knot plus sampled knots");

  // knots[0] is the prepended origin; sampling starts at the seed knot.
  const std::vector<double> xs(partition.knots.begin() + 1, partition.knots.end());
  const std::size_t n = xs.size();
  if (n < 10) throw ValidationError("component extraction needs at least 10 partition knots");

  // h_tilde at the knots, with the occupation time accumulated gap by gap so
  // the quadrature cost stays linear in the number of knots.
  std::vector<double> h(n);
  {
    const RealFunc& rate = dec.phi;
    double tau = dec.rho == 0.0 ? 0.0 : time_measure(rate, xs[0], dec.quad_tol);
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && dec.rho != 0.0)
        tau += adaptive_simpson([&rate](double u) { return 1.0 / checked_positive_rate(rate, u); },
                                xs[i - 1], xs[i], dec.quad_tol);
      h[i] = dec.f.log_value(xs[i]) - dec.rho * tau;
    }
  }

  // Windowed least-squares slopes of h_tilde over runs of 5 knots; a trailing
  // run shorter than 2 knots is absorbed into its neighbour.
  Polyline e_prof;
  {
    std::size_t start = 0;
    while (start < n) {
      std::size_t end = std::min(start + 5, n);
      if (n - end == 1) end = n;
      double mx = 0.0, mh = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        mx += xs[i];
        mh += h[i];
      }
      const double m = static_cast<double>(end - start);
      mx /= m;
      mh /= m;
      double sxx = 0.0, sxh = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxh += (xs[i] - mx) * (h[i] - mh);
      }
      if (!(sxx > 0.0)) throw NumericError("degenerate slope window in component extraction");
      e_prof.xs.push_back(mx);
      e_prof.ys.push_back(sxh / sxx);
      start = end;
    }
    e_prof.finish();
  }

  // Constant component: c(x_i) = h(x_i) - integral_0^{x_i} e, interpolated
  // linearly between knots so the reassembly is exact at every knot.
  Polyline c_prof;
  c_prof.xs = xs;
  c_prof.ys.resize(n);
  for (std::size_t i = 0; i < n; ++i) c_prof.ys[i] = h[i] - e_prof.integral_from_zero(xs[i]);
  c_prof.finish();

  std::vector<std::pair<double, double>> e_table(e_prof.xs.size());
  for (std::size_t i = 0; i < e_prof.xs.size(); ++i) e_table[i] = {e_prof.xs[i], e_prof.ys[i]};
  std::vector<std::pair<double, double>> d_log_table(n);
  for (std::size_t i = 0; i < n; ++i) d_log_table[i] = {c_prof.xs[i], c_prof.ys[i]};

  RealFunc e_fn = polyline_func(e_table, false, "windowed_slope_e(" + dec.f.label() + ")");
  RealFunc d_fn = polyline_func(d_log_table, true, "windowed_const_d(" + dec.f.label() + ")");

  GammaRepresentation rep = build_gamma(dec.rho, dec.phi, d_fn, e_fn, dec.quad_tol);
  rep.e_table = std::move(e_table);
  rep.d_log_table = std::move(d_log_table);
  return rep;
}

ConvergenceReport verify_reduction(const RealFunc& e, const RealFunc& phi, const TGrid& grid,
                                   const XSchedule& schedule, double tol, double quad_tol) {
  if (!e.valid() || !phi.valid()) throw ValidationError("remainder and rate required");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (!(quad_tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
  grid.validate();
  schedule.validate();

  RealFunc ee = e;
  RealFunc rate = phi;
  auto dev = [ee, rate, quad_tol](double t, double x) {
    const double span = t * rate(x);
    if (span == 0.0) return 0.0;
    if (ee.has_exact_integral())
      return std::abs(ee.integral_from_zero(x + span) - ee.integral_from_zero(x));
    return std::abs(
        adaptive_simpson([&ee](double v) { return ee(v); }, x, x + span, quad_tol));
  };
  return sup_abs_profile(dev, grid, schedule, tol);
}

}  // namespace beurling
