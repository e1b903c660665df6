#pragma once

// Config-driven scenarios: INI loading, dispatch to the pipelines, and
// report.json / manifest.json / CSV emission.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "radoncomp/radon_rn.hpp"
#include "radoncomp/sphere.hpp"

namespace radoncomp {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitHypothesis = 2,
  kExitDomination = 3,
  kExitConstruction = 4,
};

struct ScenarioConfig {
  std::string kind;
  std::string description;
  double p = 2.0;
  double q = 1.0;
  bool dual = false;
  int n_polar = 64;
  int n_azimuth = 128;
  int l_max = -1;
  LineGrid t_grid;
  int dir_polar = 8;
  int dir_azimuth = 16;
  bool spatial_fallback = false;
  double rel_tol = 1e-9;
  double domination_tol = 1e-9;
  std::map<std::string, std::string> functions;
  std::string out_dir = "out";
  std::string source;  // raw config text
  std::string path;
};

const std::vector<std::string>& scenario_kinds();

/// InputInvalid for unknown kinds, bad numbers or missing sections.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text, const std::string& path = {});

struct RunOptions {
  double tol_scale = 1.0;
  std::string out_dir;  // overrides the config when set
  int threads = 0;
};

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::vector<std::string> files;
};

/// Runs the scenario and writes its artifacts. Library errors become exit
/// codes with a report; only failures to write output escape as IoError.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {});

const char* report_schema_text();

void write_sphere_csv(const std::string& path, const SphericalFunction& f);
void write_sinogram_csv(const std::string& path, const Sinogram& s);
void write_series_csv(const std::string& path, const std::vector<double>& x, const std::vector<double>& y,
                      const char* x_name = "t");

}  // namespace radoncomp
