#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace beurling {

/// One row of the per-x deviation table emitted by `run`.
struct ProfileRow {
  double x = 0.0;
  double sup_deviation = 0.0;
  std::size_t n_skipped = 0;
};

enum class ReportFormat { csv, json };

/// Everything a scenario run produces: the summary document (fixed keys
/// scenario, verdict, extrapolated_limit, rho, decay_exponent, tolerance,
/// plus a details object), the profile behind it, and extra artifacts
/// (filename -> contents) such as serialised representations. Scenarios
/// without a deviation profile leave `profile` empty (header-only CSV).
struct ReportBundle {
  nlohmann::ordered_json summary;
  std::vector<ProfileRow> profile;
  std::vector<std::pair<std::string, std::string>> artifacts;
};

/// Parses, validates and runs a scenario config document. Unknown config
/// keys are rejected. Throws ParseError/ValidationError for bad configs and
/// EvalError/NumericError for runtime failures; never swallows verdicts.
ReportBundle run_scenario(const std::string& config_text);

/// Renders the profile table with shortest round-trip number formatting:
/// CSV columns x, sup_deviation, n_skipped, or the equivalent JSON array.
std::string render_profile(const std::vector<ProfileRow>& profile, ReportFormat format);

/// Writes report.csv (or report.json), summary.json and any artifacts into
/// out_dir, creating it if needed. Byte-deterministic for identical bundles.
/// I/O failures raise std::ios_base::failure or filesystem_error.
void emit_report(const ReportBundle& bundle, ReportFormat format, const std::string& out_dir);

/// Exit code implied by the summary verdict: 0 for pass or verdict-free
/// scenarios, 1 for fail or inconclusive.
int verdict_exit_code(const ReportBundle& bundle);

}  // namespace beurling
