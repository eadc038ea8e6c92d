// Acceptance harness for the nine top-level verification targets. Each
// criterion prints exactly one PASS/FAIL line; the process exits nonzero if
// any criterion fails. argv[1] names the CLI binary used by the scenario
// criteria (defaults to ./beurling-lab).

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "beurling/brv.hpp"
#include "beurling/expr.hpp"
#include "beurling/flow.hpp"
#include "beurling/interp.hpp"
#include "beurling/real_func.hpp"
#include "beurling/represent.hpp"
#include "beurling/sn_check.hpp"

using namespace beurling;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && detail.empty()) detail = what;
    ok = ok && cond;
  }
};

std::string cli_path;
fs::path scratch;

int run_cli(const std::string& config, const std::string& tag, nlohmann::json* summary) {
  fs::path dir = scratch / tag;
  fs::create_directories(dir);
  fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << config;
  std::string cmd = "\"" + cli_path + "\" run \"" + cfg.string() + "\" --out \"" +
                    dir.string() + "\" >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  int exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  if (summary != nullptr) {
    std::ifstream in(dir / "summary.json");
    if (in.good()) *summary = nlohmann::json::parse(in, nullptr, false);
  }
  return exit_code;
}

std::string num(double v) { return format_double(v); }

// closed-form index-rho function along each catalog rate, as expression text
std::string f_rho_text(const std::string& phi_spec, double rho) {
  std::string r = rho < 0.0 ? "(0-" + num(-rho) + ")" : num(rho);
  if (phi_spec == "builtin:const_c:1") return "exp(" + r + "*(x-1))";
  if (phi_spec == "sqrt(x)") return "exp(2*" + r + "*(sqrt(x)-1))";
  if (phi_spec == "x^0.7") return "exp(((x^0.3)-1)*(" + r + "/0.3))";
  if (phi_spec == "builtin:x_over_log") return "exp(" + r + "*(log(x)^2)/2)";
  return "";
}

// --------------------------------------------------------------------------

Criterion index_recovery() {
  Criterion c;
  auto start = std::chrono::steady_clock::now();
  const TGrid grid = TGrid::symmetric(0.3, 0.06);
  double worst_rho = 0.0, worst_cfe = 0.0;
  for (const char* spec : {"builtin:const_c:1", "sqrt(x)", "x^0.7", "builtin:x_over_log"}) {
    RealFunc phi = resolve_func_spec(spec);
    for (double rho : {-1.0, 0.5, 2.0}) {
      IndexEstimate est =
          estimate_index(make_f_rho(rho, phi), phi, grid, XSchedule::defaults());
      worst_rho = std::max(worst_rho, std::fabs(est.rho - rho));
      worst_cfe = std::max(worst_cfe, est.cfe_max_residual);
      c.require(std::fabs(est.rho - rho) <= 1e-2,
                std::string(spec) + " rho=" + num(rho) + ": estimate off by " +
                    num(std::fabs(est.rho - rho)));
      c.require(est.cfe_max_residual <= 1e-2,
                std::string(spec) + " rho=" + num(rho) + ": additive defect " +
                    num(est.cfe_max_residual));
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(secs < 10.0, "runtime " + num(secs) + " s exceeds 10 s");
  if (c.ok)
    c.detail = "worst |rho error| " + num(worst_rho) + ", worst additive defect " +
               num(worst_cfe) + ", " + num(secs) + " s";
  return c;
}

Criterion uct_band() {
  Criterion c;
  RealFunc sq = resolve_func_spec("sqrt(x)");
  ConvergenceReport rep = uct_profile(make_f_rho(1.0, sq), sq, 1.0, TGrid{-1.0, 1.0, 0.1},
                                      XSchedule{100.0, 10.0, 5});
  double at_1e4 = -1.0;
  for (auto [x, dev] : rep.per_x)
    if (x == 10000.0) at_1e4 = dev;
  c.require(at_1e4 >= 2.0e-3 && at_1e4 <= 3.0e-3,
            "deviation at x=1e4 is " + num(at_1e4) + ", expected 2.5e-3 within 20%");
  c.require(std::fabs(rep.decay_exponent + 0.5) <= 0.1,
            "decay exponent " + num(rep.decay_exponent) + ", expected -0.5 within 0.1");
  if (c.ok)
    c.detail = "deviation(1e4) " + num(at_1e4) + ", decay " + num(rep.decay_exponent);
  return c;
}

Criterion sn_verdicts() {
  Criterion c;
  struct Case {
    const char* spec;
    XSchedule schedule;
  };
  // slowly-decaying deviations (~x^-0.1 and ~1/log x) need deeper schedules
  const Case passing[] = {
      {"builtin:const_c:1", XSchedule::defaults()},
      {"builtin:power_alpha:0.3", XSchedule::defaults()},
      {"builtin:power_alpha:0.5", XSchedule::defaults()},
      {"builtin:power_alpha:0.9", XSchedule{100.0, 2.0, 75}},
      {"builtin:x_over_log", XSchedule{100.0, 2.0, 310}},
  };
  for (const Case& k : passing) {
    VariationVerdict v = check_sn(resolve_func_spec(k.spec), TGrid::defaults(), k.schedule);
    c.require(v.passed(), std::string(k.spec) + ": expected pass, got " +
                              verdict_name(v.report.verdict) + " (" + v.report.note + ")");
  }

  // the identity rate: deviation is exactly sup|t|, constant in x; grid kept
  // inside t > -1 so every point is evaluable
  VariationVerdict id = check_sn(resolve_func_spec("builtin:identity_x"),
                                 TGrid{-0.5, 2.0, 0.1}, XSchedule::defaults());
  c.require(id.report.verdict == Verdict::fail,
            std::string("identity_x: expected fail, got ") + verdict_name(id.report.verdict));
  for (auto [x, dev] : id.report.per_x)
    c.require(dev == 2.0, "identity_x deviation at x=" + num(x) + " is " + num(dev) +
                              ", expected exactly sup|t| = 2");
  if (c.ok) c.detail = "5 passing rates, identity_x fails at exactly sup|t|";
  return c;
}

Criterion cocycle() {
  Criterion c;
  RealFunc sq = resolve_func_spec("sqrt(x)");
  RatioField sigma(sq, sq);
  std::vector<double> ts = TGrid{-1.0, 1.0, 0.1}.points();
  double worst = 0.0;
  for (double s : ts)
    for (double t : ts) worst = std::max(worst, cocycle_defect(sigma, s, t, 1e4));
  c.require(worst <= 1e-4, "sqrt defect at x=1e4 is " + num(worst));

  RealFunc unit = resolve_func_spec("builtin:const_c:1");
  RatioField flat(unit, unit);
  for (double s : ts)
    for (double t : ts)
      c.require(cocycle_defect(flat, s, t, 1e4) == 0.0,
                "constant-rate defect must vanish identically");

  ConvergenceReport rep =
      cocycle_defect_profile(sq, sq, TGrid{-1.0, 1.0, 0.1}, XSchedule{100.0, 10.0, 5});
  c.require(rep.verdict == Verdict::pass,
            std::string("batch verdict ") + verdict_name(rep.verdict));
  if (c.ok) c.detail = "sup defect(1e4) " + num(worst) + ", batch pass";
  return c;
}

Criterion flow_consistency() {
  Criterion c;
  struct Entry {
    const char* spec;
    double (*tau)(double);
  };
  const Entry catalog[] = {
      {"builtin:const_c:1", [](double x) { return x - 1.0; }},
      {"sqrt(x)", [](double x) { return 2.0 * (std::sqrt(x) - 1.0); }},
      {"builtin:identity_x", [](double x) { return std::log(x); }},
  };
  for (const Entry& e : catalog) {
    RealFunc phi = resolve_func_spec(e.spec);
    for (double x : {4.0, 1e2, 1e4}) {
      double tau = time_measure(phi, x);
      c.require(std::fabs(tau - e.tau(x)) <= 1e-6,
                std::string(e.spec) + ": tau(" + num(x) + ") misses the closed form by " +
                    num(std::fabs(tau - e.tau(x))));
      c.require(std::fabs(reach_time(phi, 1.0, x) - tau) <= 1e-6,
                std::string(e.spec) + ": reach_time disagrees with tau at x=" + num(x));
      double res = embedding_residual(phi, x, 0.7, 1.1);
      c.require(res <= 1e-6, std::string(e.spec) + ": embedding residual " + num(res) +
                                 " at x=" + num(x));
    }
  }

  RealFunc sq = resolve_func_spec("sqrt(x)");
  std::mt19937_64 gen(0x5eedf10eULL);
  std::uniform_real_distribution<double> logx(std::log(10.0), std::log(1e6));
  std::uniform_real_distribution<double> st(-1.0, 1.0);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    NearAssocDecomposition d = near_assoc(sq, std::exp(logx(gen)), st(gen), st(gen));
    if (std::fabs(d.lhs - d.rhs) > 1e-12 * std::max(1.0, std::fabs(d.lhs))) ++bad;
    if (d.concat_residual > 1e-12 * std::max(1.0, d.gamma)) ++bad;
  }
  c.require(bad == 0, num(bad) + " of 1000 random triples broke the exact-identity bound");
  if (c.ok) c.detail = "3 rates x 3 base points, 1000 random triples exact";
  return c;
}

Criterion interpolation() {
  Criterion c;
  RealFunc sq = resolve_func_spec("sqrt(x)");
  BloomPartition part = bloom_partition(sq, 1.0, 1e18, 1000);
  c.require(part.knots.size() == 1000, "expected a 1000-knot partition");

  // (i) gaps equal the rate at the left knot
  for (std::size_t i = 1; i + 1 < part.knots.size(); ++i) {
    double gap = part.knots[i + 1] - part.knots[i];
    if (std::fabs(gap - sq(part.knots[i])) > 1e-12 * std::max(1.0, part.knots[i + 1])) {
      c.require(false, "knot gap off at index " + std::to_string(i));
      break;
    }
  }

  // (ii) random interior points stay weakly between neighboring knot values
  InterpolantC1 hat = interpolate_c1(sq, part);
  const auto& ks = hat.knots();
  const auto& vs = hat.values();
  std::mt19937_64 gen(0x1417e9b0ULL);
  std::uniform_real_distribution<double> u(ks.front(), ks.back());
  int outside = 0;
  for (int i = 0; i < 1000; ++i) {
    double x = u(gen);
    std::size_t cell =
        static_cast<std::size_t>(std::upper_bound(ks.begin(), ks.end(), x) - ks.begin()) - 1;
    if (cell + 1 >= ks.size()) cell = ks.size() - 2;
    double v = hat(x);
    if (v < std::min(vs[cell], vs[cell + 1]) || v > std::max(vs[cell], vs[cell + 1])) ++outside;
  }
  c.require(outside == 0, std::to_string(outside) + " of 1000 interior samples escaped");

  // (iii) measured slope constant
  c.require(hat.slope_constant() <= 1.5 + 1e-12,
            "slope constant " + num(hat.slope_constant()));

  // composite: the interpolant is itself a usable rate
  BloomPartition big = bloom_partition(sq, 1.0, 6e7);
  RealFunc smoothed = interpolate_c1(sq, big).as_real_func("interpolated sqrt");
  VariationVerdict sn = check_sn(smoothed, TGrid::defaults(), XSchedule::defaults());
  c.require(sn.passed(), std::string("interpolant self-neglect: ") +
                             verdict_name(sn.report.verdict));

  RealFunc f = make_f_rho(1.0, sq);
  const TGrid grid = TGrid::symmetric(0.3, 0.06);
  double rho_raw = estimate_index(f, sq, grid, XSchedule::defaults()).rho;
  double rho_hat = estimate_index(f, smoothed, grid, XSchedule::defaults()).rho;
  c.require(std::fabs(rho_hat - rho_raw) <= 1e-2,
            "index along the interpolant drifts: " + num(rho_raw) + " vs " + num(rho_hat));
  if (c.ok)
    c.detail = "slope constant " + num(hat.slope_constant()) + ", index drift " +
               num(std::fabs(rho_hat - rho_raw));
  return c;
}

Criterion representation() {
  Criterion c;
  RealFunc sq = resolve_func_spec("sqrt(x)");
  GammaRepresentation rep =
      build_gamma(1.0, sq, resolve_func_spec("1+1/x"), resolve_func_spec("1/(1+x)"));

  IndexEstimate est =
      estimate_index(rep.assembled, sq, TGrid::defaults(), XSchedule::defaults());
  c.require(std::fabs(est.rho - 1.0) <= 2e-2,
            "index of the assembled function: " + num(est.rho));

  ConvergenceReport red =
      verify_reduction(rep.e_component, sq, TGrid::defaults(), XSchedule::defaults());
  c.require(red.verdict == Verdict::pass,
            std::string("reduction verdict ") + verdict_name(red.verdict));
  for (auto [x, dev] : red.per_x)
    if (x >= 1e6)
      c.require(dev <= 1e-2, "remainder integral " + num(dev) + " at x=" + num(x));

  // round trip: decompose the rate itself at rho = 0 and reassemble
  BloomPartition part = bloom_partition(sq, 50.0, 6e7, 20000);
  GammaRepresentation ext = extract_components(decompose(sq, sq, 0.0), part);
  std::vector<double> xs = XSchedule::defaults().points();
  double worst = 0.0;
  for (std::size_t j = xs.size() / 2; j < xs.size(); ++j) {
    double dev = std::fabs(std::expm1(ext.assembled.log_value(xs[j]) - sq.log_value(xs[j])));
    worst = std::max(worst, dev);
    c.require(dev <= 1e-2,
              "reassembly off by " + num(dev) + " at x=" + num(xs[j]));
  }
  if (c.ok)
    c.detail = "index " + num(est.rho) + ", worst upper-half reassembly error " + num(worst);
  return c;
}

Criterion karamata_mode() {
  Criterion c;
  RealFunc id = resolve_func_spec("builtin:identity_x");
  for (int k = -2; k <= 12; ++k) {
    double t = k / 4.0;
    for (double x : {1.0, 7.0, 255.0, 4096.0, 1048575.0, 1048576.0})
      c.require(preaction(id, t, x) == (1.0 + t) * x,
                "preaction not exact at t=" + num(t) + ", x=" + num(x));
  }

  nlohmann::json summary;
  int rc = run_cli(R"js({"scenario": "karamata-mode", "f": "x^2"})js", "karamata", &summary);
  c.require(rc == 0, "karamata-mode scenario exited " + std::to_string(rc));
  c.require(summary.is_object() && summary.contains("details"),
            "karamata-mode summary missing or unreadable");
  double worst = -1.0;
  if (summary.is_object() && summary.contains("details")) {
    for (const auto& row : summary["details"]["g_samples"]) {
      double t = row[0].get<double>(), g = row[1].get<double>();
      worst = std::max(worst, std::fabs(g - (1.0 + t) * (1.0 + t)));
    }
    c.require(worst >= 0.0 && worst <= 1e-3,
              "limit misses (1+t)^2 by " + num(worst) + " on the t-grid");
  }
  if (c.ok) c.detail = "preaction exact on dyadics, worst limit error " + num(worst);
  return c;
}

Criterion proposition_crosscheck() {
  Criterion c;
  int engaged = 0, runs = 0;
  for (const char* spec : {"builtin:const_c:1", "sqrt(x)", "x^0.7", "builtin:x_over_log"}) {
    for (double rho : {-1.0, 0.5, 2.0}) {
      std::string schedule =
          std::string(spec) == "builtin:x_over_log"
              ? R"js(, "schedule": {"x0": 100.0, "ratio": 2.0, "count": 310})js"
              : "";
      std::string config = std::string("{\"scenario\": \"crosscheck-proposition\", \"f\": \"") +
                           f_rho_text(spec, rho) + "\", \"phi\": \"" + spec +
                           "\", \"rho\": " + num(rho) +
                           R"js(, "grid": {"lo": -1.0, "hi": 1.0, "step": 0.1})js" + schedule +
                           "}";
      nlohmann::json summary;
      int rc = run_cli(config, "crosscheck_" + std::to_string(runs), &summary);
      ++runs;
      c.require(rc == 0, std::string(spec) + " rho=" + num(rho) + " exited " +
                             std::to_string(rc));
      if (summary.is_object() && summary.contains("details")) {
        c.require(summary["details"]["consistent"].get<bool>(),
                  std::string(spec) + " rho=" + num(rho) + ": implication violated");
        if (summary["details"]["implication_engaged"].get<bool>()) ++engaged;
      }
    }
  }
  c.require(runs == 12, "expected 12 scenario runs");
  c.require(engaged == 12, "implication engaged on " + std::to_string(engaged) +
                               " of 12 members (uct must pass everywhere)");
  if (c.ok) c.detail = "12 members, implication engaged and consistent on all";
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  cli_path = argc > 1 ? argv[1] : "./beurling-lab";
  scratch = fs::temp_directory_path() / ("beurling_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(scratch);

  struct Item {
    const char* name;
    Criterion (*run)();
  };
  const Item items[] = {
      {"index recovery across the rate catalog", index_recovery},
      {"uniform convergence band at x = 1e4", uct_band},
      {"self-neglect verdicts across the catalog", sn_verdicts},
      {"asymptotic cocycle defect", cocycle},
      {"flow, occupation time and embedding consistency", flow_consistency},
      {"rate interpolation and its composites", interpolation},
      {"representation assembly, reduction and round trip", representation},
      {"power-law specialisation and exact preaction", karamata_mode},
      {"proposition cross-check over the catalog", proposition_crosscheck},
  };

  bool all_ok = true;
  int n = 0;
  for (const Item& item : items) {
    ++n;
    Criterion c;
    try {
      c = item.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    all_ok = all_ok && c.ok;
    std::printf("%s  %d. %s%s%s\n", c.ok ? "PASS" : "FAIL", n, item.name,
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
  }

  std::error_code ec;
  fs::remove_all(scratch, ec);
  return all_ok ? 0 : 1;
}
