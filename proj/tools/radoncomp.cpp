// radoncomp <subcommand> --config <file> [--out <dir>] [--tol-scale <x>] [--threads <n>]
// radoncomp --emit-schema

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "radoncomp/kernels.hpp"
#include "radoncomp/scenario.hpp"

int main(int argc, char** argv) {
  using namespace radoncomp;
  CLI::App app{"Radon-transform comparison toolkit"};
  app.require_subcommand(0, 1);
  bool emit_schema = false;
  app.add_flag("--emit-schema", emit_schema, "Print the report.json schema and exit");

  std::string config;
  RunOptions opt;
  for (const std::string& kind : scenario_kinds()) {
    CLI::App* sub = app.add_subcommand(kind, "Run a scenario of kind " + kind);
    sub->add_option("--config", config, "Scenario INI file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "Output directory (overrides [output] dir)");
    sub->add_option("--tol-scale", opt.tol_scale, "Multiply every tolerance by this factor")->check(CLI::PositiveNumber);
    sub->add_option("--threads", opt.threads, "OpenMP team size (default: RADONCOMP_THREADS, else all cores)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInputError;
  }

  if (emit_schema) {
    std::cout << report_schema_text();
    return kExitOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitInputError;
  }
  const std::string kind = app.get_subcommands().front()->get_name();

  if (opt.threads == 0) {
    if (const char* env = std::getenv("RADONCOMP_THREADS")) {
      opt.threads = std::atoi(env);
      if (opt.threads <= 0) {
        std::cerr << "radoncomp: RADONCOMP_THREADS must be a positive integer\n";
        return kExitInputError;
      }
    }
  }

  try {
    const ScenarioConfig cfg = load_config(config);
    if (cfg.kind != kind) {
      std::cerr << "radoncomp: config kind '" << cfg.kind << "' does not match subcommand '" << kind << "'\n";
      return kExitInputError;
    }
    const RunResult res = run_scenario(cfg, opt);
    std::cout << res.report["status"].get<std::string>() << " (exit " << res.exit_code << ")\n";
    if (!res.report["error"].is_null()) std::cerr << res.report["error"]["message"].get<std::string>() << "\n";
    return res.exit_code;
  } catch (const Error& e) {
    std::cerr << "radoncomp: " << e.what() << "\n";
    return kExitInputError;
  }
}
