#pragma once

#include <string>
#include <utility>
#include <vector>

#include "beurling/asymptotics.hpp"
#include "beurling/interp.hpp"
#include "beurling/real_func.hpp"

namespace beurling {

/// The canonical index-rho function along the rate phi:
///   f_rho(x) = exp(rho * integral_1^x du / phi(u)).
/// f_rho(1) = 1 exactly; the occupation-time integral is memoised per
/// argument behind an internally synchronised cache, and the returned
/// function carries an exact log-scale evaluation and an exact derivative
/// (rho * f_rho(x) / phi(x)).
RealFunc make_f_rho(double rho, const RealFunc& phi, double quad_tol = 1e-10);

/// A function in assembled canonical form
///   f(x) = d(x) * exp(rho * integral_1^x du/phi(u) + integral_0^x e(v) dv),
/// with d eventually constant and positive, e eventually vanishing.
struct GammaRepresentation {
  double rho = 0.0;
  RealFunc phi;
  RealFunc d_component;
  RealFunc e_component;
  RealFunc assembled;

  // Tabulated component data when the components came out of extraction
  // (empty for expression-backed components). d_log_table holds (x, log d(x))
  // knots, e_table holds (x, e(x)) knots; both interpolate linearly with
  // constant extension. The JSON round trip serialises these.
  std::vector<std::pair<double, double>> d_log_table;
  std::vector<std::pair<double, double>> e_table;
};

/// Piecewise-linear function through `table` (x strictly increasing), constant
/// beyond either end, admitting 0. With log_scale the table carries log-values
/// and the function is their exponential (positive, with an exact log path).
RealFunc polyline_func(const std::vector<std::pair<double, double>>& table, bool log_scale,
                       std::string label);

/// Assembles the canonical form from given components. d must evaluate
/// positive wherever the assembly is evaluated (violations raise EvalError);
/// e is re-anchored to a domain containing 0 so the inner integral can start
/// at the origin.
GammaRepresentation build_gamma(double rho, const RealFunc& phi, const RealFunc& d,
                                const RealFunc& e, double quad_tol = 1e-10);

/// Log-scale remainder of f after removing the index part:
///   h_tilde(x) = log f(x) - rho * integral_1^x du/phi(u).
/// Reassembly exp(h_tilde(x)) * f_rho(x) recovers f to quadrature tolerance.
struct Decomposition {
  RealFunc h_tilde;
  double rho = 0.0;
  RealFunc f;
  RealFunc phi;
  double quad_tol = 1e-10;
};

Decomposition decompose(const RealFunc& f, const RealFunc& phi, double rho,
                        double quad_tol = 1e-10);

/// Recovers canonical components from a decomposition over a rate partition
/// (>= 10 knots): e is the piecewise-linear profile of windowed least-squares
/// slopes of h_tilde (windows of 5 consecutive knots), the constant part is
/// c(x_n) = h_tilde(x_n) - integral_0^{x_n} e, and d = exp(c interpolated).
/// The assembled function reproduces f exactly at the knots up to quadrature
/// tolerance and interpolates in between.
GammaRepresentation extract_components(const Decomposition& dec, const BloomPartition& partition);

/// Checks the remainder-reduction property of an e-component along phi:
/// sup_t |integral_x^{x + t phi(x)} e(v) dv| -> 0 along the schedule.
ConvergenceReport verify_reduction(const RealFunc& e, const RealFunc& phi, const TGrid& grid,
                                   const XSchedule& schedule, double tol = 1e-2,
                                   double quad_tol = 1e-10);

/// Serialises {rho, phi, d, e} to a JSON document. phi must be
/// expression-backed; d and e are stored as expression text when they are
/// expression-backed and as their tabulated knots otherwise (error if a
/// component is neither). Numeric fields survive a round trip bit-exactly.
std::string representation_to_json(const GammaRepresentation& rep);

/// Rebuilds a representation from its JSON form via build_gamma.
GammaRepresentation representation_from_json(const std::string& text, double quad_tol = 1e-10);

}  // namespace beurling
