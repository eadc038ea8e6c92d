#include "beurling/flow.hpp"

#include <cmath>
#include <limits>

#include "beurling/errors.hpp"
#include "beurling/quadrature.hpp"

namespace beurling {

double preaction(const RealFunc& phi, double t, double x) {
  double y = x + t * phi(x);
  if (!std::isfinite(y) || !phi.domain().contains(y))
    throw EvalError(EvalError::Kind::domain,
                    "pre-action image " + format_double(y) + " leaves the domain", y);
  return y;
}

NearAssocDecomposition near_assoc(const RealFunc& phi, double x, double s, double t,
                                  std::optional<double> z_opt) {
  NearAssocDecomposition d{};
  d.x = x;
  d.s = s;
  d.t = t;
  double px = phi(x);
  if (!(px > 0.0))
    throw EvalError(EvalError::Kind::nonpositive, "rate must be positive at base point", x);
  d.y = preaction(phi, s, x);
  double py = phi(d.y);
  if (!(py > 0.0))
    throw EvalError(EvalError::Kind::nonpositive, "rate must be positive at shifted point", d.y);
  d.gamma = px / py;
  d.lhs = x + (t + s) * px;
  d.rhs = d.y + d.gamma * t * py;
  d.z = z_opt.value_or(d.lhs);
  if (!phi.domain().contains(d.z))
    throw EvalError(EvalError::Kind::domain, "concatenation point leaves the domain", d.z);
  double pz = phi(d.z);
  d.concat_residual = std::fabs(px / pz - (px / py) * (py / pz));
  return d;
}

// ---------------------------------------------------------------------------
// RK4 with step doubling

namespace {

struct Stepper {
  const RealFunc& phi;

  double rate(double u) const {
    double p = phi(u);
    if (!(p > 0.0))
      throw EvalError(EvalError::Kind::nonpositive, "flow rate must stay positive", u);
    return p;
  }

  double rk4(double u, double h) const {
    double k1 = rate(u);
    double k2 = rate(u + 0.5 * h * k1);
    double k3 = rate(u + 0.5 * h * k2);
    double k4 = rate(u + h * k3);
    return u + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  }

  // full step vs two half steps; returns the half-step value and the
  // standard error estimate |u2 - u1| / 15
  std::pair<double, double> doubled(double u, double h) const {
    double u1 = rk4(u, h);
    double u2 = rk4(rk4(u, 0.5 * h), 0.5 * h);
    return {u2, std::fabs(u2 - u1) / 15.0};
  }
};

}  // namespace

FlowTrajectory integrate_flow(const RealFunc& phi, double x0, double t_end, double tol) {
  if (!(tol > 0.0)) throw ValidationError("flow tolerance must be positive");
  if (!std::isfinite(x0) || !std::isfinite(t_end))
    throw ValidationError("flow arguments must be finite");
  if (!phi.domain().contains(x0))
    throw EvalError(EvalError::Kind::domain, "flow start outside the rate domain", x0);

  FlowTrajectory traj;
  traj.x0 = x0;
  traj.t_end = t_end;
  traj.tol = tol;
  traj.samples.emplace_back(0.0, x0);
  traj.min_step = std::numeric_limits<double>::infinity();
  if (t_end == 0.0) {
    traj.min_step = 0.0;
    return traj;
  }

  Stepper step{phi};
  double span = std::fabs(t_end);
  double dir = t_end > 0.0 ? 1.0 : -1.0;
  double t = 0.0;
  double u = x0;
  double h = dir * span / 64.0;

  while (dir * (t_end - t) > 0.0) {
    if (std::fabs(h) > std::fabs(t_end - t)) h = t_end - t;
    auto [u_next, err] = step.doubled(u, h);
    // per-step budget proportional to the step, floored at the rounding
    // scale of the state: a sliver step near t_end cannot beat roundoff
    double budget = tol * std::fabs(h) / span +
                    4.0 * std::numeric_limits<double>::epsilon() *
                        (std::fabs(u) + std::fabs(u_next));
    if (err > budget && std::fabs(h) > 1e-14 * span) {
      ++traj.n_rejected;
      h *= 0.5;
      if (std::fabs(h) < 1e-14 * span)
        throw NumericError("flow step underflow at t = " + format_double(t));
      continue;
    }
    t = (std::fabs(t_end - t) <= std::fabs(h) * (1.0 + 1e-12)) ? t_end : t + h;
    u = u_next;
    if (!phi.domain().contains(u))
      throw EvalError(EvalError::Kind::domain, "orbit left the rate domain", u);
    traj.samples.emplace_back(t, u);
    ++traj.n_steps;
    traj.max_local_error = std::max(traj.max_local_error, err);
    traj.min_step = std::min(traj.min_step, std::fabs(h));
    traj.max_step = std::max(traj.max_step, std::fabs(h));
    if (err < 0.02 * budget) h *= 2.0;  // cheap growth; re-clamped above
  }
  return traj;
}

double time_measure(const RealFunc& phi, double x, double tol) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError("time measure needs finite x > 0");
  if (x == 1.0) return 0.0;
  auto integrand = [&phi](double u) {
    double p = phi(u);
    if (!(p > 0.0))
      throw EvalError(EvalError::Kind::nonpositive, "rate must be positive on [1, x]", u);
    return 1.0 / p;
  };
  return adaptive_simpson(integrand, 1.0, x, tol);
}

double reach_time(const RealFunc& phi, double from, double to, double tol) {
  if (!(from < to)) throw ValidationError("reach_time needs from < to");
  if (!(tol > 0.0)) throw ValidationError("reach_time tolerance must be positive");
  if (!phi.domain().contains(from))
    throw EvalError(EvalError::Kind::domain, "reach_time start outside the rate domain", from);

  Stepper step{phi};
  double t = 0.0;
  double u = from;
  double h = (to - from) / (64.0 * step.rate(from));  // initial guess from the local rate

  for (std::size_t iter = 0; iter < 2000000; ++iter) {
    auto [u_next, err] = step.doubled(u, h);
    if (err > tol * h && h > 1e-15 * std::max(1.0, t)) {
      h *= 0.5;
      if (!(h > 0.0)) throw NumericError("reach_time step underflow");
      continue;
    }
    if (u_next >= to) {
      // event inside this step: bisect the step length
      double lo = 0.0, hi = h;
      for (int k = 0; k < 200; ++k) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double um = step.rk4(u, mid);
        if (um >= to)
          hi = mid;
        else
          lo = mid;
      }
      return t + hi;
    }
    t += h;
    u = u_next;
    if (err < 0.02 * tol * h) h *= 2.0;
  }
  throw NumericError("reach_time did not reach the target");
}

EmbeddingMap::EmbeddingMap(RealFunc phi, double x, double tol)
    : phi_(std::move(phi)), x_(x), tol_(tol) {
  if (!phi_.domain().contains(x))
    throw EvalError(EvalError::Kind::domain, "embedding base outside the rate domain", x);
}

double EmbeddingMap::operator()(double t) const {
  if (t == 0.0) return 0.0;
  return integrate_flow(phi_, x_, t, tol_).final_u() - x_;
}

double embedding_residual(const RealFunc& phi, double x, double s, double t, double tol) {
  EmbeddingMap f_x(phi, x, tol);
  double fs = f_x(s);
  double fst = f_x(s + t);
  double y = x + fs;
  EmbeddingMap f_y(phi, y, tol);
  return std::fabs(fst - fs - f_y(t));
}

}  // namespace beurling
