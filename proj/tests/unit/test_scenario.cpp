#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../common/schema_check.hpp"
#include "radoncomp/scenario.hpp"
#include "util.hpp"

using namespace radoncomp;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("radoncomp_unit_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_text(const std::string& text, const std::string& name) {
  RunOptions opt;
  opt.out_dir = scratch_dir(name).string();
  return run_scenario(parse_config(text), opt);
}

const char* kCertifyPd = R"(
[scenario]
kind = certify-pd
q = 1
[grid]
n_polar = 16
n_azimuth = 32
[functions]
f = 1
)";

}  // namespace

TEST_CASE("config parsing") {
  auto c = parse_config(R"(
; comment
[scenario]
kind = rn-compare
p = 1.5
[grid]
t_max = 12
t_points = 1024
spatial_fallback = true
[functions]
phi = ball(1)
psi = 0.25*ball(2)
[tolerances]
domination = 1e-3
[output]
dir = somewhere
)");
  CHECK(c.kind == "rn-compare");
  CHECK(c.p == 1.5);
  CHECK(c.t_grid.T == 12.0);
  CHECK(c.t_grid.N == 1024);
  CHECK(c.spatial_fallback);
  CHECK(c.domination_tol == 1e-3);
  CHECK(c.out_dir == "somewhere");
  CHECK(c.functions.at("psi") == "0.25*ball(2)");
  CHECK(c.n_polar == 64);
}

TEST_CASE("config errors") {
  CHECK_ERROR_CODE(parse_config("[scenario]\nkind = nope\n"), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(parse_config("[grid]\nn_polar = 8\n"), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(parse_config("[scenario]\nkind = slicing\n[extra]\na = 1\n"), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(parse_config("[scenario]\nkind = slicing\np = two\n"), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(parse_config("[scenario]\nkind = slicing\n[grid]\nn_polr = 8\n"), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(parse_config("[scenario]\nkind = slicing\nkindd = x\n"), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(parse_config("[scenario]\nkind = slicing\np = -1\n"), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(parse_config("[scenario]\nkind = slicing\n[grid]\nn_polar = 8.5\n"), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(parse_config("[scenario]\nkind = slicing\n[grid]\nt_points = 7\n"), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(load_config("/nonexistent/radoncomp.ini"), ErrorCode::InputInvalid);
}

TEST_CASE("every kind is registered") {
  const auto& kinds = scenario_kinds();
  CHECK(kinds.size() == 9);
  for (const auto& k : kinds) CHECK_NOTHROW(parse_config("[scenario]\nkind = " + k + "\n"));
}

TEST_CASE("certify-pd run writes a valid report") {
  auto res = run_text(kCertifyPd, "certify_pd");
  CHECK(res.exit_code == kExitOk);
  CHECK(res.report["status"] == "positive-definite");
  const auto schema = nlohmann::json::parse(report_schema_text());
  const auto errors = testing_schema::validate(res.report, schema);
  CHECK_MESSAGE(errors.empty(), (errors.empty() ? "" : errors.front()));
  const fs::path dir = fs::temp_directory_path() / "radoncomp_unit_certify_pd";
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(nlohmann::json::parse(slurp(dir / "report.json")) == res.report);
  const double w = res.report["certificates"][0]["witness_value"].get<double>();
  CHECK(std::abs(w - 4.0 * kPi) < 1e-10);
}

TEST_CASE("input errors become exit 1 with a report") {
  auto missing = run_text("[scenario]\nkind = slicing\n", "missing");
  CHECK(missing.exit_code == kExitInputError);
  CHECK(missing.report["error"]["code"] == "InputInvalid");

  auto odd = run_text("[scenario]\nkind = slicing\n[functions]\nf = 1 + 0.1*z\n", "odd");
  CHECK(odd.exit_code == kExitInputError);
  CHECK(odd.report["error"]["code"] == "NotEven");

  auto unused = run_text("[scenario]\nkind = slicing\n[functions]\nf = 1\ng = 2\n", "unused");
  CHECK(unused.exit_code == kExitInputError);

  auto syntax = run_text("[scenario]\nkind = slicing\n[functions]\nf = 1 + (\n", "syntax");
  CHECK(syntax.report["error"]["code"] == "SyntaxError");
  CHECK(syntax.report["error"]["message"].get<std::string>().find("1:5") != std::string::npos);

  const auto schema = nlohmann::json::parse(report_schema_text());
  CHECK(testing_schema::validate(syntax.report, schema).empty());
}

TEST_CASE("hypothesis outcomes map to exit 2") {
  auto na = run_text("[scenario]\nkind = rn-counterexample\n[functions]\npsi = catalog:gauss-r2(1)\n", "na");
  CHECK(na.exit_code == kExitHypothesis);
  CHECK(na.report["status"] == "not-applicable");
  auto npd = run_text("[scenario]\nkind = certify-intersection\n[functions]\nf = exp(-r^2)\n", "npd");
  CHECK(npd.exit_code == kExitHypothesis);
}

TEST_CASE("domination failure maps to exit 3") {
  auto r = run_text("[scenario]\nkind = spherical-compare\n[grid]\nn_polar = 16\nn_azimuth = 32\n"
                    "[functions]\nf = 2\ng = 1\n",
                    "dom");
  CHECK(r.exit_code == kExitDomination);
  CHECK(r.report["status"] == "domination-fails");
}

TEST_CASE("reports are reproducible apart from timing") {
  auto a = run_text(kCertifyPd, "rep_a");
  auto b = run_text(kCertifyPd, "rep_b");
  a.report.erase("timing");
  b.report.erase("timing");
  CHECK(a.report.dump() == b.report.dump());
}

TEST_CASE("schema text is valid JSON") {
  const auto s = nlohmann::json::parse(report_schema_text());
  CHECK(s["type"] == "object");
  CHECK(s["required"].size() == 11);
}
