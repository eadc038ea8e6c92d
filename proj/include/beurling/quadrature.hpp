#pragma once

#include <functional>

namespace beurling {

/// Signed integral of f over [a, b] (negated when a > b) by adaptive Simpson
/// refinement with the classical |S_fine - S_coarse| <= 15 tol acceptance
/// test and one Richardson correction on accepted panels. Subdivision is
/// always left panel first, so the evaluation order -- and hence the rounding
/// -- is deterministic. tol is absolute.
///
/// If f raises EvalError exactly at an endpoint, the endpoint is moved
/// inward by a few ulps-scale offsets before giving up and the skipped strip
/// is covered by a rectangle rule; this admits integrands whose formula
/// degenerates at a boundary while staying integrable (e.g. rate reciprocals
/// vanishing at the lower end).
///
/// Throws NumericError when the tolerance cannot be met within max_depth
/// bisection levels.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 48);

}  // namespace beurling
