#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "beurling/real_func.hpp"

namespace beurling {

/// Pre-action of the additive line on itself driven by the rate phi:
/// (t, x) -> x + t*phi(x). Errors (EvalError::domain) when the image leaves
/// phi's domain, so iterated applications stay well defined.
double preaction(const RealFunc& phi, double t, double x);

/// Exact near-associativity bookkeeping for the pre-action. Writing
/// y = x + s*phi(x), the identity
///   x + (t+s)*phi(x) = y + (gamma*t)*phi(y),  gamma = phi(x)/phi(y)
/// holds in exact arithmetic; lhs and rhs here agree to rounding. The
/// adjustment factors concatenate: gamma_x(z) = gamma_x(y)*gamma_y(z), and
/// concat_residual records |gamma_x(z) - gamma_x(y)*gamma_y(z)| for
/// z = x + (t+s)*phi(x) (or a caller-supplied z).
struct NearAssocDecomposition {
  double x, s, t;
  double y;        // x + s*phi(x)
  double gamma;    // phi(x)/phi(y)
  double lhs;      // x + (t+s)*phi(x)
  double rhs;      // y + gamma*t*phi(y)
  double z;        // point used for the concatenation check
  double concat_residual;
};

NearAssocDecomposition near_assoc(const RealFunc& phi, double x, double s, double t,
                                  std::optional<double> z = std::nullopt);

/// Forward orbit of du/dt = phi(u), u(0) = x0, by classical 4th-order
/// Runge-Kutta with step doubling: each step is accepted when the
/// full-step/two-half-step discrepancy over 15 is within tol*h/|t_end|
/// (error budgeted per unit time). Negative t_end integrates backward while
/// the orbit stays inside the domain.
struct FlowTrajectory {
  double x0 = 0.0;
  double t_end = 0.0;
  double tol = 0.0;
  std::vector<std::pair<double, double>> samples;  // (t, u), samples[0] = (0, x0)
  std::size_t n_steps = 0;
  std::size_t n_rejected = 0;
  double min_step = 0.0;
  double max_step = 0.0;
  double max_local_error = 0.0;  // largest accepted per-step estimate

  double final_u() const { return samples.back().second; }
};

FlowTrajectory integrate_flow(const RealFunc& phi, double x0, double t_end, double tol = 1e-9);

/// Occupation time of the flow between 1 and x: the signed integral of
/// 1/phi over [1, x] by adaptive Simpson quadrature (absolute tolerance).
double time_measure(const RealFunc& phi, double x, double tol = 1e-10);

/// Time for the orbit started at `from` to first reach `to` (from < to),
/// found by event-detecting integration: adaptive stepping until the target
/// is bracketed, then bisection inside the final step. Independent of
/// time_measure; the two must agree within combined tolerances.
double reach_time(const RealFunc& phi, double from, double to, double tol = 1e-9);

/// The additive embedding based at x: t -> u_x(t) - x where u_x is the flow
/// orbit. Satisfies f(0) = 0 exactly and the translation equation
/// f_x(s+t) = f_x(s) + f_y(t) with y = x + f_x(s).
class EmbeddingMap {
 public:
  EmbeddingMap(RealFunc phi, double x, double tol = 1e-9);

  double operator()(double t) const;
  double base() const { return x_; }

 private:
  RealFunc phi_;
  double x_;
  double tol_;
};

/// |f_x(s+t) - f_x(s) - f_y(t)| with y = x + f_x(s), each term from its own
/// integration; measures how exactly the embedding linearises the flow.
double embedding_residual(const RealFunc& phi, double x, double s, double t, double tol = 1e-9);

}  // namespace beurling
