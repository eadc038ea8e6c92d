#include <doctest.h>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "beurling/errors.hpp"
#include "beurling/interp.hpp"
#include "beurling/real_func.hpp"
#include "beurling/represent.hpp"

using namespace beurling;

TEST_CASE("canonical index functions hit their closed forms") {
  RealFunc sq = resolve_func_spec("sqrt(x)");
  RealFunc f = make_f_rho(1.0, sq);

  CHECK(f(1.0) == 1.0);
  CHECK(f.positive());
  CHECK(f.has_exact_log());
  // closed form exp(2*(sqrt(x)-1))
  CHECK(f(1e4) == doctest::Approx(std::exp(198.0)).epsilon(1e-8));
  CHECK(f.log_value(1e8) == doctest::Approx(2.0 * (1e4 - 1.0)).epsilon(1e-10));
  // f' = rho * f / phi
  CHECK(f.derivative(100.0) == doctest::Approx(f(100.0) / 10.0).epsilon(1e-7));

  RealFunc flat = make_f_rho(0.0, sq);
  CHECK(flat(77.7) == 1.0);

  RealFunc dec = make_f_rho(-0.5, resolve_func_spec("builtin:const_c:2"));
  CHECK(dec(5.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("assembly from components matches a hand computation") {
  GammaRepresentation rep = build_gamma(1.0, resolve_func_spec("sqrt(x)"),
                                        resolve_func_spec("1+1/x"), resolve_func_spec("1/(1+x)"));
  // d * exp(rho*tau + E) with tau = 2(sqrt(x)-1), E = log(1+x)
  double expected = 1.01 * std::exp(18.0 + std::log(101.0));
  CHECK(rep.assembled(100.0) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(rep.assembled.has_exact_log());
  CHECK(rep.e_component.domain().contains(0.0));  // re-anchored for the inner integral
  CHECK(rep.d_log_table.empty());
  CHECK(rep.rho == 1.0);
}

TEST_CASE("trivial components assemble to the constant 1") {
  GammaRepresentation rep = build_gamma(0.0, resolve_func_spec("sqrt(x)"),
                                        resolve_func_spec("1"), resolve_func_spec("0"));
  for (double x : {0.5, 1.0, 42.0, 1e5}) CHECK(rep.assembled(x) == 1.0);
}

TEST_CASE("nonpositive d is rejected at evaluation") {
  GammaRepresentation rep = build_gamma(0.0, resolve_func_spec("sqrt(x)"),
                                        resolve_func_spec("x-10"), resolve_func_spec("0"));
  CHECK(rep.assembled(100.0) == doctest::Approx(90.0).epsilon(1e-12));
  CHECK_THROWS_AS(rep.assembled(5.0), EvalError);
}

TEST_CASE("decomposition strips the index part") {
  RealFunc sq = resolve_func_spec("sqrt(x)");
  Decomposition dec = decompose(resolve_func_spec("exp(2*(sqrt(x)-1))"), sq, 1.0);
  for (double x : {10.0, 1e3, 1e5}) CHECK(std::fabs(dec.h_tilde(x)) <= 1e-7);
  CHECK(dec.rho == 1.0);

  Decomposition raw = decompose(sq, sq, 0.0);
  CHECK(raw.h_tilde(1e4) == doctest::Approx(0.5 * std::log(1e4)).epsilon(1e-12));
}

TEST_CASE("component extraction reproduces the function over its partition") {
  RealFunc sq = resolve_func_spec("sqrt(x)");
  BloomPartition part = bloom_partition(sq, 50.0, 1e6);
  Decomposition dec = decompose(sq, sq, 0.0);
  GammaRepresentation rep = extract_components(dec, part);

  CHECK_FALSE(rep.e_table.empty());
  CHECK_FALSE(rep.d_log_table.empty());
  CHECK(rep.e_component.has_exact_integral());

  // exact at knots up to quadrature tolerance
  for (std::size_t i = 1; i < part.knots.size(); i += 97) {
    double k = part.knots[i];
    CHECK(std::fabs(rep.assembled.log_value(k) - sq.log_value(k)) <= 1e-8);
  }
  // interpolated in between: relative error within 1%
  for (double x : XSchedule{100.0, 2.0, 14}.points()) {
    CHECK(std::fabs(std::expm1(rep.assembled.log_value(x) - sq.log_value(x))) <= 1e-2);
  }
}

TEST_CASE("extraction of a generic function with nontrivial index") {
  // the product tree has no log-scale path, so keep every evaluation point
  // below the overflow threshold of the plain value (x ~ 1.26e5)
  RealFunc sq = resolve_func_spec("sqrt(x)");
  RealFunc f = resolve_func_spec("exp(2*(sqrt(x)-1))*(1+1/x)");
  BloomPartition part = bloom_partition(sq, 50.0, 1.2e5);
  GammaRepresentation rep = extract_components(decompose(f, sq, 1.0), part);

  for (double x : XSchedule{100.0, 2.0, 10}.points())
    CHECK(std::fabs(std::expm1(rep.assembled.log_value(x) - f.log_value(x))) <= 1e-2);
}

TEST_CASE("extraction needs a usable partition") {
  RealFunc sq = resolve_func_spec("sqrt(x)");
  BloomPartition tiny = bloom_partition(sq, 50.0, 100.0);  // a handful of knots
  CHECK_THROWS_AS(extract_components(decompose(sq, sq, 0.0), tiny), ValidationError);
}

TEST_CASE("remainder reduction profile for an integrable e-component") {
  ConvergenceReport rep =
      verify_reduction(resolve_func_spec("1/(1+x)"), resolve_func_spec("sqrt(x)"),
                       TGrid::defaults(), XSchedule{100.0, 10.0, 5});
  CHECK(rep.verdict == Verdict::pass);
  // |log((1 + x + t*sqrt(x)) / (1 + x))| at x = 1e6, worst at t = -2
  CHECK(rep.per_x.back().second == doctest::Approx(0.002002000666667013).epsilon(1e-6));

  // a non-vanishing e keeps a constant-size remainder: must fail
  ConvergenceReport flat =
      verify_reduction(resolve_func_spec("builtin:const_c:1"), resolve_func_spec("sqrt(x)"),
                       TGrid::defaults(), XSchedule{100.0, 10.0, 5});
  CHECK(flat.verdict == Verdict::fail);
}

TEST_CASE("polylines evaluate, extend and integrate exactly") {
  std::vector<std::pair<double, double>> table = {{1.0, 1.0}, {3.0, 2.0}};
  RealFunc p = polyline_func(table, false, "p");
  CHECK(p(1.0) == 1.0);
  CHECK(p(3.0) == 2.0);
  CHECK(p(2.0) == 1.5);
  CHECK(p(0.25) == 1.0);   // constant head
  CHECK(p(10.0) == 2.0);   // constant tail
  CHECK(p.has_exact_integral());
  CHECK(p.integral_from_zero(0.5) == 0.5);
  CHECK(p.integral_from_zero(2.0) == 2.25);  // 1 + trapezoid over [1,2]
  CHECK(p.integral_from_zero(5.0) == 8.0);   // 4 at the last knot, then flat at 2

  RealFunc lp = polyline_func({{1.0, 0.0}, {2.0, std::log(4.0)}}, true, "lp");
  CHECK(lp.positive());
  CHECK(lp.has_exact_log());
  CHECK(lp(1.0) == 1.0);
  CHECK(lp(2.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(lp.log_value(1.5) == 0.5 * std::log(4.0));

  CHECK_THROWS_AS(polyline_func({}, false, "bad"), ValidationError);
  CHECK_THROWS_AS(polyline_func({{1.0, 0.0}, {1.0, 1.0}}, false, "bad"), ValidationError);
}

TEST_CASE("representations survive the JSON round trip byte-exactly") {
  GammaRepresentation rep = build_gamma(1.0, resolve_func_spec("sqrt(x)"),
                                        resolve_func_spec("1+1/x"), resolve_func_spec("1/(1+x)"));
  std::string text = representation_to_json(rep);
  GammaRepresentation back = representation_from_json(text);
  CHECK(representation_to_json(back) == text);
  for (double x : {2.0, 50.0, 1234.5})
    CHECK(back.assembled(x) == doctest::Approx(rep.assembled(x)).epsilon(1e-12));

  // tabulated components round trip the same way
  RealFunc sq = resolve_func_spec("sqrt(x)");
  BloomPartition part = bloom_partition(sq, 50.0, 1e5);
  GammaRepresentation ext = extract_components(decompose(sq, sq, 0.0), part);
  std::string ext_text = representation_to_json(ext);
  GammaRepresentation ext_back = representation_from_json(ext_text);
  CHECK(representation_to_json(ext_back) == ext_text);
  CHECK(ext_back.e_component.has_exact_integral());
  CHECK(ext_back.assembled(12345.0) ==
        doctest::Approx(ext.assembled(12345.0)).epsilon(1e-12));

  CHECK_THROWS_AS(representation_from_json("{nope"), ValidationError);
  CHECK_THROWS_AS(representation_from_json("{\"rho\": 1.0}"), ValidationError);
}
