#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "beurling/errors.hpp"
#include "beurling/real_func.hpp"
#include "beurling/scenario.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_dir,
                const std::string& format) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config file '" << config_path << "'\n";
    return 4;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  try {
    beurling::ReportBundle bundle = beurling::run_scenario(buf.str());
    const auto fmt =
        format == "json" ? beurling::ReportFormat::json : beurling::ReportFormat::csv;
    beurling::emit_report(bundle, fmt, out_dir);

    const auto& verdict = bundle.summary["verdict"];
    std::cout << bundle.summary["scenario"].get<std::string>() << ": "
              << (verdict.is_null() ? std::string("done")
                                    : "verdict " + verdict.get<std::string>())
              << "\n";
    return beurling::verdict_exit_code(bundle);
  } catch (const beurling::ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << " (offset " << ex.position() << ")\n";
    return 2;
  } catch (const beurling::ValidationError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  } catch (const beurling::EvalError& ex) {
    std::cerr << "evaluation error: " << ex.what()
              << " (x = " << beurling::format_double(ex.argument()) << ")\n";
    return 3;
  } catch (const beurling::NumericError& ex) {
    std::cerr << "numeric error: " << ex.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& ex) {
    std::cerr << "i/o error: " << ex.what() << "\n";
    return 4;
  } catch (const std::ios_base::failure& ex) {
    std::cerr << "i/o error: " << ex.what() << "\n";
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for regular variation along a self-neglecting rate"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";

  CLI::App* run = app.add_subcommand("run", "Run a scenario config and write reports");
  run->add_option("config", config_path, "Scenario config file (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--format", format, "Profile table format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  CLI::App* lb = app.add_subcommand("list-builtins", "List built-in function families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // --help stays 0; usage errors map to the config-error code
  }

  if (lb->parsed()) {
    for (const auto& info : beurling::builtin_catalogue())
      std::cout << info.signature << "\t" << info.description << "\n";
    return 0;
  }
  return run_command(config_path, out_dir, format);
}
