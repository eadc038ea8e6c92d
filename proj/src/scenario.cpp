#include "beurling/scenario.hpp"

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "beurling/brv.hpp"
#include "beurling/errors.hpp"
#include "beurling/flow.hpp"
#include "beurling/interp.hpp"
#include "beurling/real_func.hpp"
#include "beurling/represent.hpp"
#include "beurling/sn_check.hpp"

namespace beurling {

namespace {

using nlohmann::ordered_json;

// --- config access -----------------------------------------------------

// Strict view over the config object: every key must be consumed by the
// scenario that runs, anything left over is a config error (typo safety).
class ConfigReader {
 public:
  explicit ConfigReader(const ordered_json& doc) : doc_(doc) {
    if (!doc.is_object()) throw ValidationError("scenario config must be a JSON object");
  }

  bool has(const std::string& key) const { return doc_.contains(key); }

  std::string text(const std::string& key) {
    require(key);
    return text_checked(key);
  }

  std::string text_or(const std::string& key, const std::string& def) {
    if (!doc_.contains(key)) return def;
    return text_checked(key);
  }

  double number(const std::string& key) {
    require(key);
    return number_checked(key);
  }

  double number_or(const std::string& key, double def) {
    if (!doc_.contains(key)) return def;
    return number_checked(key);
  }

  /// Sub-object (grid, schedule, partition); nullptr when absent.
  const ordered_json* child(const std::string& key) {
    if (!doc_.contains(key)) return nullptr;
    mark(key);
    if (!doc_[key].is_object())
      throw ValidationError("config \"" + key + "\" must be an object");
    return &doc_[key];
  }

  void finish() const {
    for (const auto& item : doc_.items())
      if (!used_.count(item.key()))
        throw ValidationError("unknown config key \"" + item.key() + "\"");
  }

 private:
  void mark(const std::string& key) { used_.insert(key); }

  void require(const std::string& key) const {
    if (!doc_.contains(key))
      throw ValidationError("scenario config needs \"" + key + "\"");
  }

  std::string text_checked(const std::string& key) {
    mark(key);
    if (!doc_[key].is_string())
      throw ValidationError("config \"" + key + "\" must be a string");
    return doc_[key].get<std::string>();
  }

  double number_checked(const std::string& key) {
    mark(key);
    if (!doc_[key].is_number())
      throw ValidationError("config \"" + key + "\" must be a number");
    return doc_[key].get<double>();
  }

  const ordered_json& doc_;
  std::set<std::string> used_;
};

double sub_number(const ordered_json& obj, const std::string& parent, const std::string& key,
                  double def) {
  if (!obj.contains(key)) return def;
  if (!obj[key].is_number())
    throw ValidationError("config \"" + parent + "." + key + "\" must be a number");
  return obj[key].get<double>();
}

void reject_unknown(const ordered_json& obj, const std::string& parent,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known)
      throw ValidationError("unknown config key \"" + parent + "." + item.key() + "\"");
  }
}

TGrid grid_from(const ordered_json* obj, TGrid def) {
  TGrid g = def;
  if (obj) {
    reject_unknown(*obj, "grid", {"lo", "hi", "step"});
    g.lo = sub_number(*obj, "grid", "lo", g.lo);
    g.hi = sub_number(*obj, "grid", "hi", g.hi);
    g.step = sub_number(*obj, "grid", "step", g.step);
  }
  g.validate();
  return g;
}

XSchedule schedule_from(const ordered_json* obj, XSchedule def) {
  XSchedule s = def;
  if (obj) {
    reject_unknown(*obj, "schedule", {"x0", "ratio", "count"});
    s.x0 = sub_number(*obj, "schedule", "x0", s.x0);
    s.ratio = sub_number(*obj, "schedule", "ratio", s.ratio);
    if (obj->contains("count")) {
      if (!(*obj)["count"].is_number_integer())
        throw ValidationError("config \"schedule.count\" must be an integer");
      s.count = (*obj)["count"].get<int>();
    }
  }
  s.validate();
  return s;
}

struct PartitionCfg {
  double x1 = 0.0;
  double horizon = 0.0;
  std::size_t max_knots = 1u << 20;
};

PartitionCfg partition_from(const ordered_json* obj) {
  if (!obj) throw ValidationError("scenario config needs \"partition\"");
  reject_unknown(*obj, "partition", {"x1", "horizon", "max_knots"});
  PartitionCfg p;
  if (!obj->contains("x1") || !obj->contains("horizon"))
    throw ValidationError("config \"partition\" needs x1 and horizon");
  p.x1 = sub_number(*obj, "partition", "x1", 0.0);
  p.horizon = sub_number(*obj, "partition", "horizon", 0.0);
  if (obj->contains("max_knots")) {
    if (!(*obj)["max_knots"].is_number_unsigned() && !(*obj)["max_knots"].is_number_integer())
      throw ValidationError("config \"partition.max_knots\" must be a positive integer");
    const auto v = (*obj)["max_knots"].get<long long>();
    if (v < 3) throw ValidationError("config \"partition.max_knots\" must be at least 3");
    p.max_knots = static_cast<std::size_t>(v);
  }
  return p;
}

double positive_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw ValidationError("tolerance must be positive and finite");
  return tol;
}

// --- summary assembly ---------------------------------------------------

ordered_json opt_num(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

ordered_json make_summary(const std::string& scenario, std::optional<Verdict> verdict,
                          std::optional<double> limit, std::optional<double> rho,
                          std::optional<double> decay, std::optional<double> tol) {
  ordered_json s = ordered_json::object();
  s["scenario"] = scenario;
  s["verdict"] = verdict ? ordered_json(verdict_name(*verdict)) : ordered_json(nullptr);
  s["extrapolated_limit"] = opt_num(limit);
  s["rho"] = opt_num(rho);
  s["decay_exponent"] = opt_num(decay);
  s["tolerance"] = opt_num(tol);
  s["details"] = ordered_json::object();
  return s;
}

std::vector<ProfileRow> rows_from(const ConvergenceReport& r) {
  std::vector<ProfileRow> rows(r.per_x.size());
  for (std::size_t i = 0; i < r.per_x.size(); ++i)
    rows[i] = {r.per_x[i].first, r.per_x[i].second,
               i < r.skipped_per_x.size() ? r.skipped_per_x[i] : 0};
  return rows;
}

ordered_json report_digest(const ConvergenceReport& r) {
  ordered_json d = ordered_json::object();
  d["verdict"] = verdict_name(r.verdict);
  d["last_deviation"] = r.last_deviation();
  d["extrapolated_limit"] = r.extrapolated_limit;
  d["decay_exponent"] = r.decay_exponent;
  d["n_evaluations"] = r.n_evaluations;
  d["n_skipped"] = r.n_skipped;
  if (!r.note.empty()) d["note"] = r.note;
  return d;
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

// --- scenarios ----------------------------------------------------------

ReportBundle run_check_sn(ConfigReader& cfg) {
  RealFunc phi = resolve_func_spec(cfg.text("phi"));
  TGrid grid = grid_from(cfg.child("grid"), TGrid::defaults());
  XSchedule sched = schedule_from(cfg.child("schedule"), XSchedule::defaults());
  const double tol = positive_tol(cfg.number_or("tol", 1e-2));
  cfg.finish();

  VariationVerdict v = check_sn(phi, grid, sched, tol);
  ReportBundle out;
  out.profile = rows_from(v.report);
  out.summary = make_summary("check-sn", v.report.verdict, v.report.extrapolated_limit,
                             std::nullopt, v.report.decay_exponent, tol);
  ordered_json& det = out.summary["details"];
  det["check"] = v.check;
  det["subject"] = v.subject;
  det["min_rate_on_schedule"] = v.min_rate_on_schedule;
  det["report"] = report_digest(v.report);
  return out;
}

ReportBundle run_check_slow(ConfigReader& cfg) {
  RealFunc phi = resolve_func_spec(cfg.text("phi"));
  TGrid grid = grid_from(cfg.child("grid"), TGrid::defaults());
  XSchedule sched = schedule_from(cfg.child("schedule"), XSchedule::defaults());
  const double tol = positive_tol(cfg.number_or("tol", 1e-2));

  if (cfg.has("psi")) {
    // Slow variation of a separate function along the rate.
    RealFunc psi = resolve_func_spec(cfg.text("psi"));
    cfg.finish();
    VariationVerdict v = check_phi_slow(psi, phi, grid, sched, tol);
    ReportBundle out;
    out.profile = rows_from(v.report);
    out.summary = make_summary("check-slow", v.report.verdict, v.report.extrapolated_limit,
                               std::nullopt, v.report.decay_exponent, tol);
    ordered_json& det = out.summary["details"];
    det["check"] = v.check;
    det["subject"] = v.subject;
    det["rate"] = v.rate;
    det["report"] = report_digest(v.report);
    return out;
  }

  // Composite: the rate is slowly varying along itself AND o(x); together
  // these imply the self-neglect property checked by check-sn.
  cfg.finish();
  VariationVerdict sn = check_sn(phi, grid, sched, tol);
  VariationVerdict oo = check_little_o(phi, sched, tol);
  const Verdict verdict = combine(sn.report.verdict, oo.report.verdict);

  ReportBundle out;
  out.profile = rows_from(sn.report);
  out.summary = make_summary("check-slow", verdict, sn.report.extrapolated_limit, std::nullopt,
                             sn.report.decay_exponent, tol);
  ordered_json& det = out.summary["details"];
  det["subject"] = sn.subject;
  det["self_variation"] = report_digest(sn.report);
  det["little_o"] = report_digest(oo.report);
  return out;
}

ReportBundle run_estimate_index(ConfigReader& cfg) {
  RealFunc f = resolve_func_spec(cfg.text("f"));
  RealFunc phi = resolve_func_spec(cfg.text("phi"));
  TGrid grid = grid_from(cfg.child("grid"), TGrid::defaults());
  XSchedule sched = schedule_from(cfg.child("schedule"), XSchedule::defaults());
  cfg.finish();

  IndexEstimate est = estimate_index(f, phi, grid, sched);
  ReportBundle out;
  out.summary = make_summary("estimate-index", std::nullopt, std::nullopt, est.rho, std::nullopt,
                             std::nullopt);
  ordered_json& det = out.summary["details"];
  det["fit_residual"] = est.fit_residual;
  det["cfe_max_residual"] = est.cfe_max_residual;
  ordered_json ks = ordered_json::array();
  for (const auto& [t, k] : est.k_samples) ks.push_back(ordered_json::array({t, k}));
  det["k_samples"] = std::move(ks);
  return out;
}

ReportBundle run_uct(ConfigReader& cfg) {
  RealFunc f = resolve_func_spec(cfg.text("f"));
  RealFunc phi = resolve_func_spec(cfg.text("phi"));
  const double rho = cfg.number("rho");
  TGrid grid = grid_from(cfg.child("grid"), TGrid::defaults());
  XSchedule sched = schedule_from(cfg.child("schedule"), XSchedule::defaults());
  const double tol = positive_tol(cfg.number_or("tol", 1e-2));
  cfg.finish();

  ConvergenceReport rep = uct_profile(f, phi, rho, grid, sched, tol);
  ReportBundle out;
  out.profile = rows_from(rep);
  out.summary =
      make_summary("uct", rep.verdict, rep.extrapolated_limit, rho, rep.decay_exponent, tol);
  out.summary["details"]["report"] = report_digest(rep);
  return out;
}

ReportBundle run_cocycle(ConfigReader& cfg) {
  RealFunc phi = resolve_func_spec(cfg.text("phi"));
  RealFunc f = cfg.has("f") ? resolve_func_spec(cfg.text("f")) : phi;
  TGrid grid = grid_from(cfg.child("grid"), TGrid::defaults());
  XSchedule sched = schedule_from(cfg.child("schedule"), XSchedule::defaults());
  const double tol = positive_tol(cfg.number_or("tol", 1e-2));
  cfg.finish();

  ConvergenceReport rep = cocycle_defect_profile(f, phi, grid, sched, tol);
  ReportBundle out;
  out.profile = rows_from(rep);
  out.summary = make_summary("cocycle", rep.verdict, rep.extrapolated_limit, std::nullopt,
                             rep.decay_exponent, tol);
  out.summary["details"]["report"] = report_digest(rep);
  return out;
}

ReportBundle run_flow(ConfigReader& cfg) {
  RealFunc phi = resolve_func_spec(cfg.text("phi"));
  const double x0 = cfg.number("x0");
  const double t_end = cfg.number("t_end");
  const double ode_tol = positive_tol(cfg.number_or("ode_tol", 1e-9));
  cfg.finish();

  FlowTrajectory traj = integrate_flow(phi, x0, t_end, ode_tol);
  ReportBundle out;
  out.summary = make_summary("flow", std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                             std::nullopt);
  ordered_json& det = out.summary["details"];
  det["x0"] = traj.x0;
  det["t_end"] = traj.t_end;
  det["final_u"] = traj.final_u();
  det["n_steps"] = traj.n_steps;
  det["n_rejected"] = traj.n_rejected;
  det["n_samples"] = traj.samples.size();
  det["min_step"] = traj.min_step;
  det["max_step"] = traj.max_step;
  det["max_local_error"] = traj.max_local_error;
  return out;
}

ReportBundle run_time_measure(ConfigReader& cfg) {
  RealFunc phi = resolve_func_spec(cfg.text("phi"));
  const double x = cfg.number("x");
  const double quad_tol = positive_tol(cfg.number_or("quad_tol", 1e-10));
  const double ode_tol = positive_tol(cfg.number_or("ode_tol", 1e-9));
  cfg.finish();

  const double tau = time_measure(phi, x, quad_tol);
  ReportBundle out;
  out.summary = make_summary("time-measure", std::nullopt, std::nullopt, std::nullopt,
                             std::nullopt, std::nullopt);
  ordered_json& det = out.summary["details"];
  det["x"] = x;
  det["tau"] = tau;
  det["reach_time"] = x > 1.0 ? ordered_json(reach_time(phi, 1.0, x, ode_tol)) : nullptr;
  const double rate = phi(x);
  det["rate_at_x"] = rate;
  det["x_over_rate"] = x / rate;
  return out;
}

ReportBundle run_represent(ConfigReader& cfg) {
  const double rho = cfg.number("rho");
  RealFunc phi = resolve_func_spec(cfg.text("phi"));
  RealFunc d = resolve_func_spec(cfg.text("d"));
  RealFunc e = resolve_func_spec(cfg.text("e"));
  TGrid grid = grid_from(cfg.child("grid"), TGrid::defaults());
  XSchedule sched = schedule_from(cfg.child("schedule"), XSchedule::defaults());
  const double tol = positive_tol(cfg.number_or("tol", 1e-2));
  const double quad_tol = positive_tol(cfg.number_or("quad_tol", 1e-10));
  cfg.finish();

  GammaRepresentation rep = build_gamma(rho, phi, d, e, quad_tol);
  IndexEstimate est = estimate_index(rep.assembled, phi, grid, sched);
  ConvergenceReport red = verify_reduction(rep.e_component, phi, grid, sched, tol, quad_tol);

  ReportBundle out;
  out.profile = rows_from(red);
  out.summary =
      make_summary("represent", red.verdict, red.extrapolated_limit, est.rho, red.decay_exponent,
                   tol);
  ordered_json& det = out.summary["details"];
  det["rho_input"] = rho;
  det["rho_estimated"] = est.rho;
  det["fit_residual"] = est.fit_residual;
  det["cfe_max_residual"] = est.cfe_max_residual;
  det["reduction"] = report_digest(red);
  det["representation_file"] = "representation.json";
  out.artifacts.emplace_back("representation.json", representation_to_json(rep));
  return out;
}

ReportBundle run_decompose(ConfigReader& cfg) {
  RealFunc f = resolve_func_spec(cfg.text("f"));
  RealFunc phi = resolve_func_spec(cfg.text("phi"));
  const double rho = cfg.number("rho");
  PartitionCfg pc = partition_from(cfg.child("partition"));
  TGrid grid = grid_from(cfg.child("grid"), TGrid::defaults());
  XSchedule sched = schedule_from(cfg.child("schedule"), XSchedule::defaults());
  const double tol = positive_tol(cfg.number_or("tol", 1e-2));
  const double quad_tol = positive_tol(cfg.number_or("quad_tol", 1e-10));
  cfg.finish();

  Decomposition dec = decompose(f, phi, rho, quad_tol);
  BloomPartition part = bloom_partition(phi, pc.x1, pc.horizon, pc.max_knots);
  GammaRepresentation rep = extract_components(dec, part);

  // Round trip: relative agreement of the reassembly with f on the schedule.
  std::vector<std::pair<double, double>> per_x;
  std::vector<std::size_t> skipped;
  std::size_t n_eval = 0, n_skip = 0;
  for (double xj : sched.points()) {
    ++n_eval;
    try {
      const double dev = std::abs(std::expm1(rep.assembled.log_value(xj) - f.log_value(xj)));
      per_x.emplace_back(xj, dev);
      skipped.push_back(0);
    } catch (const EvalError&) {
      ++n_skip;
    }
  }
  ConvergenceReport rt = make_report(std::move(per_x), std::move(skipped), n_eval, n_skip, tol);
  ConvergenceReport red = verify_reduction(rep.e_component, phi, grid, sched, tol, quad_tol);

  ReportBundle out;
  out.profile = rows_from(rt);
  out.summary =
      make_summary("decompose", rt.verdict, rt.extrapolated_limit, rho, rt.decay_exponent, tol);
  ordered_json& det = out.summary["details"];
  det["n_knots"] = part.knots.size() - 1;
  det["diverged"] = part.diverged;
  det["e_windows"] = rep.e_table.size();
  det["round_trip"] = report_digest(rt);
  det["reduction"] = report_digest(red);
  det["representation_file"] = "representation.json";
  out.artifacts.emplace_back("representation.json", representation_to_json(rep));
  return out;
}

ReportBundle run_interpolate(ConfigReader& cfg) {
  RealFunc phi = resolve_func_spec(cfg.text("phi"));
  PartitionCfg pc = partition_from(cfg.child("partition"));
  TGrid grid = grid_from(cfg.child("grid"), TGrid::defaults());
  XSchedule sched = schedule_from(cfg.child("schedule"), XSchedule::defaults());
  const double tol = positive_tol(cfg.number_or("tol", 1e-2));
  cfg.finish();

  BloomPartition part = bloom_partition(phi, pc.x1, pc.horizon, pc.max_knots);
  InterpolantC1 hat = interpolate_c1(phi, part);
  SmoothRepCheck chk = smooth_rep_check(phi, hat, grid, sched, tol);
  const Verdict verdict = combine(chk.ratio.verdict, chk.derivative_term.verdict);

  ReportBundle out;
  out.profile = rows_from(chk.ratio);
  out.summary = make_summary("interpolate", verdict, chk.ratio.extrapolated_limit, std::nullopt,
                             chk.ratio.decay_exponent, tol);
  ordered_json& det = out.summary["details"];
  det["n_knots"] = part.knots.size() - 1;
  det["diverged"] = part.diverged;
  det["slope_constant"] = hat.slope_constant();
  det["ratio"] = report_digest(chk.ratio);
  det["derivative_term"] = report_digest(chk.derivative_term);
  return out;
}

ReportBundle run_crosscheck(ConfigReader& cfg) {
  RealFunc f = resolve_func_spec(cfg.text("f"));
  RealFunc phi = resolve_func_spec(cfg.text("phi"));
  const double rho = cfg.number("rho");
  TGrid grid = grid_from(cfg.child("grid"), TGrid::defaults());
  XSchedule sched = schedule_from(cfg.child("schedule"), XSchedule::defaults());
  const double tol = positive_tol(cfg.number_or("tol", 1e-2));
  cfg.finish();

  ConvergenceReport uct = uct_profile(f, phi, rho, grid, sched, tol);
  const bool engaged = uct.verdict == Verdict::pass && rho != 0.0;

  ReportBundle out;
  out.profile = rows_from(uct);
  ordered_json sn_digest = nullptr;
  bool consistent = true;
  if (engaged) {
    VariationVerdict sn = check_sn(phi, grid, sched, tol);
    sn_digest = report_digest(sn.report);
    consistent = sn.passed();
  }
  out.summary = make_summary("crosscheck-proposition",
                             consistent ? Verdict::pass : Verdict::fail, uct.extrapolated_limit,
                             rho, uct.decay_exponent, tol);
  ordered_json& det = out.summary["details"];
  det["uct"] = report_digest(uct);
  det["implication_engaged"] = engaged;
  det["self_neglect"] = std::move(sn_digest);
  det["consistent"] = consistent;
  return out;
}

ReportBundle run_karamata(ConfigReader& cfg) {
  RealFunc f = resolve_func_spec(cfg.text("f"));
  TGrid grid = grid_from(cfg.child("grid"), TGrid{-0.5, 2.0, 0.1});
  XSchedule sched = schedule_from(cfg.child("schedule"), XSchedule::defaults());
  const double tol = positive_tol(cfg.number_or("tol", 1e-2));
  cfg.finish();
  if (!(grid.lo > -1.0))
    throw ValidationError("karamata-mode grid must stay above t = -1");

  RealFunc phi = builtin_family({Family::identity_x});

  // Per-t limits of the ratio field along the schedule.
  const std::vector<double> ts = grid.points();
  ordered_json g_samples = ordered_json::array();
  double num = 0.0, den = 0.0;
  std::vector<double> gs(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    gs[i] = limit_g(f, phi, ts[i], sched);
    g_samples.push_back(ordered_json::array({ts[i], gs[i]}));
    if (ts[i] == 0.0) continue;
    if (!(gs[i] > 0.0))
      throw NumericError("karamata-mode limit is not positive at t = " + format_double(ts[i]));
    const double L = std::log1p(ts[i]);
    num += L * std::log(gs[i]);
    den += L * L;
  }
  if (!(den > 0.0)) throw NumericError("karamata-mode grid has no usable t points");
  const double rho_hat = num / den;

  // Deviation from the fitted power targets (1+t)^rho_hat, relative form.
  RatioField sigma(f, phi);
  ConvergenceReport rep = sup_abs_profile(
      [&sigma, rho_hat](double t, double x) {
        return std::abs(std::expm1(sigma.log_ratio(t, x) - rho_hat * std::log1p(t)));
      },
      grid, sched, tol);

  ReportBundle out;
  out.profile = rows_from(rep);
  out.summary = make_summary("karamata-mode", rep.verdict, rep.extrapolated_limit, rho_hat,
                             rep.decay_exponent, tol);
  ordered_json& det = out.summary["details"];
  det["g_samples"] = std::move(g_samples);
  det["report"] = report_digest(rep);
  return out;
}

}  // namespace

ReportBundle run_scenario(const std::string& config_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(config_text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(std::string("config JSON: ") + ex.what(), ex.byte);
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("config JSON: ") + ex.what());
  }

  ConfigReader cfg(doc);
  const std::string kind = cfg.text("scenario");

  if (kind == "check-sn") return run_check_sn(cfg);
  if (kind == "check-slow") return run_check_slow(cfg);
  if (kind == "estimate-index") return run_estimate_index(cfg);
  if (kind == "uct") return run_uct(cfg);
  if (kind == "cocycle") return run_cocycle(cfg);
  if (kind == "flow") return run_flow(cfg);
  if (kind == "time-measure") return run_time_measure(cfg);
  if (kind == "represent") return run_represent(cfg);
  if (kind == "decompose") return run_decompose(cfg);
  if (kind == "interpolate") return run_interpolate(cfg);
  if (kind == "crosscheck-proposition") return run_crosscheck(cfg);
  if (kind == "karamata-mode") return run_karamata(cfg);
  throw ValidationError("unknown scenario \"" + kind + "\"");
}

std::string render_profile(const std::vector<ProfileRow>& profile, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out = "x,sup_deviation,n_skipped\n";
    for (const ProfileRow& row : profile) {
      out += format_double(row.x);
      out += ',';
      out += format_double(row.sup_deviation);
      out += ',';
      out += std::to_string(row.n_skipped);
      out += '\n';
    }
    return out;
  }
  ordered_json arr = ordered_json::array();
  for (const ProfileRow& row : profile) {
    ordered_json obj = ordered_json::object();
    obj["x"] = row.x;
    obj["sup_deviation"] = row.sup_deviation;
    obj["n_skipped"] = row.n_skipped;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void emit_report(const ReportBundle& bundle, ReportFormat format, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);

  auto write_file = [](const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::ios_base::failure("failed while writing " + path.string());
  };

  write_file(dir / (format == ReportFormat::csv ? "report.csv" : "report.json"),
             render_profile(bundle.profile, format));
  write_file(dir / "summary.json", bundle.summary.dump(2) + "\n");
  for (const auto& [name, contents] : bundle.artifacts) write_file(dir / name, contents);
}

int verdict_exit_code(const ReportBundle& bundle) {
  if (!bundle.summary.contains("verdict") || bundle.summary["verdict"].is_null()) return 0;
  return bundle.summary["verdict"].get<std::string>() == "pass" ? 0 : 1;
}

}  // namespace beurling
