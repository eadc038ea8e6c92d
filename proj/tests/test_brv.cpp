#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "beurling/brv.hpp"
#include "beurling/errors.hpp"
#include "beurling/real_func.hpp"

using namespace beurling;

namespace {

const XSchedule kDecade{100.0, 10.0, 5};
const TGrid kUnit{-1.0, 1.0, 0.1};

}  // namespace

TEST_CASE("ratio fields are exactly 1 at t = 0") {
  RatioField sigma(resolve_func_spec("exp(2*(sqrt(x)-1))"), resolve_func_spec("sqrt(x)"));
  CHECK(sigma(0.0, 123.4) == 1.0);
  CHECK(sigma.log_ratio(0.0, 123.4) == 0.0);
  CHECK(sigma.f().has_exact_log());
}

TEST_CASE("power functions along the identity rate give exact power ratios") {
  RatioField sigma(resolve_func_spec("x^2"), resolve_func_spec("builtin:identity_x"));
  CHECK(sigma(0.7, 1e4) == doctest::Approx(1.7 * 1.7).epsilon(1e-14));
  CHECK(sigma(-0.25, 64.0) == doctest::Approx(0.5625).epsilon(1e-14));
}

TEST_CASE("exp-rooted functions stay usable past their overflow point") {
  // f(800) = exp(1598) overflows, but the ratio is formed on the log scale
  RatioField sigma(resolve_func_spec("exp(2*(x-1))"), resolve_func_spec("builtin:const_c:1"));
  CHECK_THROWS_AS(resolve_func_spec("exp(2*(x-1))")(800.0), EvalError);
  CHECK(sigma(1.0, 800.0) == doctest::Approx(7.38905609893065).epsilon(1e-12));
}

TEST_CASE("limits along the schedule, with and without skipped points") {
  RealFunc unit = resolve_func_spec("builtin:const_c:1");
  // sigma(t, x) = e^t for every x: all samples identical, the limit is exact
  double g = limit_g(resolve_func_spec("exp(x-1)"), unit, 1.0, XSchedule::defaults());
  CHECK(g == std::exp(1.0));

  // the product form has no exact log; samples past x ~ 710 overflow and are
  // skipped, the usable prefix still carries the limit
  RealFunc capped = resolve_func_spec("exp(x-1)*1");
  CHECK_FALSE(capped.has_exact_log());
  double g2 = limit_g(capped, unit, 1.0, XSchedule{600.0, 1.05, 20});
  CHECK(g2 == doctest::Approx(std::exp(1.0)).epsilon(1e-12));

  // every point overflows: flagged, not repaired
  CHECK_THROWS_AS(limit_g(capped, unit, 1.0, XSchedule{800.0, 1.05, 20}), NumericError);
}

TEST_CASE("index estimation recovers the closed-form exponent") {
  IndexEstimate est = estimate_index(resolve_func_spec("exp(2*(sqrt(x)-1))"),
                                     resolve_func_spec("sqrt(x)"), TGrid::defaults(),
                                     XSchedule::defaults());
  CHECK(std::fabs(est.rho - 1.0) <= 1e-6);
  CHECK(est.fit_residual <= 1e-6);
  CHECK(est.cfe_max_residual <= 1e-6);
  REQUIRE(est.k_samples.size() == 41);
  CHECK(est.k_samples[20].first == 0.0);
  CHECK(est.k_samples[20].second == 0.0);
}

TEST_CASE("index estimation validates its grid and flags vanishing limits") {
  RealFunc f = resolve_func_spec("exp(2*(sqrt(x)-1))");
  RealFunc sq = resolve_func_spec("sqrt(x)");
  CHECK_THROWS_AS(estimate_index(f, sq, TGrid{-0.2, 0.2, 0.1}, XSchedule::defaults()),
                  ValidationError);
  // sigma(2, x) = exp(-60): below the positivity floor
  CHECK_THROWS_AS(estimate_index(resolve_func_spec("exp(0-30*x)"),
                                 resolve_func_spec("builtin:const_c:1"), TGrid::defaults(),
                                 XSchedule::defaults()),
                  NumericError);
}

TEST_CASE("uct profile matches the frozen deviation curve") {
  RealFunc f = resolve_func_spec("exp(2*(sqrt(x)-1))");
  RealFunc sq = resolve_func_spec("sqrt(x)");
  ConvergenceReport rep = uct_profile(f, sq, 1.0, kUnit, kDecade);
  REQUIRE(rep.per_x.size() == 5);
  const double frozen[] = {0.025990321947136453, 0.008001040607637405, 0.0025094247922161045,
                           0.0007915084828575326, 0.0002500937994129907};
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(rep.per_x[i].second == doctest::Approx(frozen[i]).epsilon(1e-12));
  CHECK(rep.verdict == Verdict::pass);

  // a wrong index leaves a t-dependent residual that does not converge away
  ConvergenceReport off = uct_profile(f, sq, 1.3, kUnit, kDecade);
  CHECK(off.verdict == Verdict::fail);
}

TEST_CASE("cocycle defect vanishes for constant rates and decays for sqrt") {
  RealFunc sq = resolve_func_spec("sqrt(x)");
  RatioField sigma(sq, sq);
  CHECK(cocycle_defect(sigma, 1.0, 1.0, 1e4) ==
        doctest::Approx(2.469181001441001e-05).epsilon(1e-9));

  RealFunc unit = resolve_func_spec("builtin:const_c:1");
  RatioField flat(unit, unit);
  for (double s : {-1.0, 0.3, 1.0})
    for (double t : {-0.5, 1.0}) CHECK(cocycle_defect(flat, s, t, 1e4) == 0.0);

  ConvergenceReport rep = cocycle_defect_profile(sq, sq, kUnit, kDecade);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.per_x.back().second == doctest::Approx(2.503129382658287e-07).epsilon(1e-9));
}

TEST_CASE("additive defects look up tabulated k samples by nearest grid point") {
  std::vector<std::pair<double, double>> k = {{-1.0, -2.0}, {0.0, 0.0}, {1.0, 2.0}};
  CHECK(cfe_residual(k, 0.4, 0.6) == 0.0);    // lookups snap to 0, 1 and 1
  CHECK(cfe_residual(k, 1.0, -1.0) == 0.0);   // exact grid points
  CHECK_THROWS_AS(cfe_residual(k, 2.5, -1.0), ValidationError);  // off the table
  CHECK_THROWS_AS(cfe_residual({{0.0, 0.0}, {1.0, 1.0}}, 0.0, 1.0), ValidationError);
}

TEST_CASE("uniformity near a shift reduces to uniformity near zero") {
  RealFunc f = resolve_func_spec("exp(2*(sqrt(x)-1))");
  RealFunc sq = resolve_func_spec("sqrt(x)");
  ShiftUniformity su = shift_uniformity(f, sq, 1.0, 0.5, kDecade, 0.5);
  CHECK(su.near_zero.verdict == Verdict::pass);
  CHECK(su.near_shift.verdict == Verdict::pass);
  CHECK_FALSE(su.verdicts_differ);
  CHECK_THROWS_AS(shift_uniformity(f, sq, 1.0, 0.5, kDecade, -1.0), ValidationError);
}
