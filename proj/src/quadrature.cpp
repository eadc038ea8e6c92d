#include "beurling/quadrature.hpp"

#include <cmath>
#include <limits>

#include "beurling/errors.hpp"
#include "beurling/expr.hpp"

namespace beurling {

namespace {

double eval_checked(const std::function<double(double)>& f, double u) {
  double v = f(u);
  if (!std::isfinite(v))
    throw EvalError(EvalError::Kind::nonfinite, "integrand not finite at " + format_double(u), u);
  return v;
}

// Endpoint values may be undefined exactly on the boundary; probe a few
// inward offsets before failing. Returns the abscissa that evaluated along
// with the value: attributing an inward value to the original endpoint would
// plant a fixed discrepancy whose Simpson contribution shrinks only as fast
// as the per-depth tolerance, so refinement could never terminate.
std::pair<double, double> eval_endpoint(const std::function<double(double)>& f, double u,
                                        double toward) {
  const double scale = std::max(1.0, std::fabs(u));
  const double dir = toward > u ? 1.0 : -1.0;
  const double offsets[] = {0.0, 1e-13, 1e-11, 1e-9};
  for (double off : offsets) {
    try {
      const double shifted = u + dir * off * scale;
      return {shifted, eval_checked(f, shifted)};
    } catch (const EvalError&) {
      if (off == offsets[3]) throw;
    }
  }
  throw EvalError(EvalError::Kind::nonfinite, "integrand undefined near endpoint", u);
}

struct Panel {
  double fa, fm, fb;
  double s;  // Simpson value over the panel
};

double simpson(double fa, double fm, double fb, double width) {
  return width * (fa + 4.0 * fm + fb) / 6.0;
}

double refine(const std::function<double(double)>& f, double a, double b, const Panel& p,
              double tol, int depth, int max_depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = eval_checked(f, lm);
  double frm = eval_checked(f, rm);
  Panel left{p.fa, flm, p.fm, simpson(p.fa, flm, p.fm, m - a)};
  Panel right{p.fm, frm, p.fb, simpson(p.fm, frm, p.fb, b - m)};
  double s2 = left.s + right.s;
  double err = s2 - p.s;
  // Halving tol per split over a wide interval can demand more than double
  // precision can express; once the discrepancy sits at the rounding floor of
  // the panel sums, further splitting only chases noise. Two floors: the
  // panel sums themselves, and the sample values, which jitter by roughly
  // |f'| * ulp(abscissa) because the nodes are rounded to the double grid --
  // the value spread across the panel stands in for |f'| * width.
  const double eps = std::numeric_limits<double>::epsilon();
  const double noise = 16.0 * eps * (std::fabs(s2) + std::fabs(p.s)) +
                       4.0 * eps * std::max(std::fabs(a), std::fabs(b)) *
                           (std::fabs(p.fm - p.fa) + std::fabs(p.fb - p.fm));
  if (std::fabs(err) <= std::max(15.0 * tol, noise)) return s2 + err / 15.0;
  if (depth >= max_depth)
    throw NumericError("quadrature tolerance not met at depth " + std::to_string(max_depth) +
                       " near [" + format_double(a) + ", " + format_double(b) + "]");
  return refine(f, a, m, left, 0.5 * tol, depth + 1, max_depth) +
         refine(f, m, b, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (!(tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw ValidationError("quadrature endpoints must be finite");
  if (a == b) return 0.0;
  if (a > b) return -adaptive_simpson(f, b, a, tol, max_depth);

  auto [a_eff, fa] = eval_endpoint(f, a, b);
  auto [b_eff, fb] = eval_endpoint(f, b, a);
  if (!(a_eff < b_eff)) return 0.5 * (fa + fb) * (b - a);
  double m = 0.5 * (a_eff + b_eff);
  double fm = eval_checked(f, m);
  Panel whole{fa, fm, fb, simpson(fa, fm, fb, b_eff - a_eff)};
  // rectangle-rule strips cover whatever the endpoint probes skipped
  return fa * (a_eff - a) + fb * (b - b_eff) + refine(f, a_eff, b_eff, whole, tol, 0, max_depth);
}

}  // namespace beurling
