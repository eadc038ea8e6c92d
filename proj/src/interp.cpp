#include "beurling/interp.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "beurling/errors.hpp"

namespace beurling {

namespace {

double positive_rate(const RealFunc& phi, double x) {
  const double p = phi(x);
  if (!(p > 0.0))
    throw EvalError(EvalError::Kind::nonpositive, "rate must be positive, got " + format_double(p),
                    x);
  return p;
}

}  // namespace

BloomPartition bloom_partition(const RealFunc& phi, double x1, double horizon,
                               std::size_t max_knots) {
  if (!phi.valid()) throw ValidationError("rate function required");
  if (!(x1 > 0.0) || !std::isfinite(x1)) throw ValidationError("seed knot must be positive");
  if (!(horizon > x1)) throw ValidationError("horizon must exceed the seed knot");
  if (max_knots < 3) throw ValidationError("max_knots must allow at least one step");

  BloomPartition part;
  part.max_knots = max_knots;
  part.knots = {0.0, x1};

  while (part.knots.size() < max_knots) {
    const double xn = part.knots.back();
    const double next = xn + positive_rate(phi, xn);
    if (!(next > xn) || next - xn < 1e-12 * std::max(1.0, xn)) break;  // stagnated
    part.knots.push_back(next);
    if (next >= horizon) {
      part.diverged = true;
      break;
    }
  }
  return part;
}

InterpolantC1::InterpolantC1(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() != values_.size()) throw ValidationError("knot/value size mismatch");
  if (knots_.size() < 2) throw ValidationError("interpolant needs at least two knots");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i] > knots_[i - 1]))
      throw ValidationError("interpolant knots must be strictly increasing");
  for (double v : values_)
    if (!std::isfinite(v)) throw ValidationError("interpolant values must be finite");
}

namespace {

// upper_bound cell lookup: index i with knots[i] <= x < knots[i+1].
std::size_t cell_of(const std::vector<double>& knots, double x) {
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  return static_cast<std::size_t>(it - knots.begin()) - 1;
}

}  // namespace

double InterpolantC1::operator()(double x) const {
  if (x <= knots_.front()) return values_.front();
  if (x >= knots_.back()) return values_.back();
  const std::size_t i = cell_of(knots_, x);
  const double th = (x - knots_[i]) / (knots_[i + 1] - knots_[i]);
  const double s = th * th * (3.0 - 2.0 * th);
  return values_[i] + s * (values_[i + 1] - values_[i]);
}

double InterpolantC1::derivative(double x) const {
  if (x <= knots_.front() || x >= knots_.back()) return 0.0;
  const std::size_t i = cell_of(knots_, x);
  const double h = knots_[i + 1] - knots_[i];
  const double th = (x - knots_[i]) / h;
  return 6.0 * th * (1.0 - th) * (values_[i + 1] - values_[i]) / h;
}

double InterpolantC1::slope_constant() const {
  // Per cell the blend's slope peaks at 1.5 * |dv| / h (theta = 1/2), so the
  // normalised constant is 1.5 on every cell with a value jump.
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double h = knots_[i + 1] - knots_[i];
    const double dv = std::abs(values_[i + 1] - values_[i]);
    if (dv == 0.0) continue;
    const double sup_slope = 1.5 * dv / h;
    worst = std::max(worst, sup_slope * h / dv);
  }
  return worst;
}

RealFunc InterpolantC1::as_real_func(const std::string& label) const {
  for (double v : values_)
    if (!(v > 0.0))
      throw ValidationError("interpolant is not positive at every knot");
  InterpolantC1 self = *this;
  RealFunc::ClosureSpec spec;
  spec.fn = [self](double x) { return self(x); };
  spec.deriv = [self](double x) { return self.derivative(x); };
  spec.domain.lo = 0.0;
  spec.domain.lo_closed = true;
  spec.positive = true;
  return RealFunc::from_closure(label, std::move(spec));
}

InterpolantC1 interpolate_c1(const RealFunc& phi, const BloomPartition& partition) {
  if (!phi.valid()) throw ValidationError("rate function required");
  if (partition.knots.size() < 3 || partition.knots[0] != 0.0)
    throw ValidationError("partition must carry the origin plus at least two sampled knots");
  std::vector<double> knots(partition.knots.begin() + 1, partition.knots.end());
  std::vector<double> values(knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) values[i] = phi(knots[i]);
  return InterpolantC1(std::move(knots), std::move(values));
}

SmoothRepCheck smooth_rep_check(const RealFunc& phi, const InterpolantC1& phi_hat,
                                const TGrid& grid, const XSchedule& schedule, double tol) {
  if (!phi.valid()) throw ValidationError("rate function required");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  grid.validate();
  schedule.validate();

  RealFunc rate = phi;
  InterpolantC1 hat = phi_hat;

  SmoothRepCheck out;
  // Agreement of the smoothed rate with the original, sampled along displaced
  // points y = x + t*phi(x) so the comparison is locally uniform.
  out.ratio = sup_deviation_profile(
      [rate, hat](double t, double x) {
        const double y = x + t * rate(x);
        return hat(y) / positive_rate(rate, y);
      },
      [](double) { return 1.0; }, grid, schedule, tol);
  // Log-derivative of the smoothed rate scaled by the rate itself: the
  // correction exponent of the smoothed representation, which must vanish.
  out.derivative_term = sup_abs_profile(
      [rate, hat](double t, double x) {
        const double y = x + t * rate(x);
        return rate(y) * hat.derivative(y) / hat(y);
      },
      grid, schedule, tol);
  return out;
}

}  // namespace beurling
