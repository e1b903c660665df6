#include "radoncomp/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/version.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "radoncomp/catalog.hpp"
#include "radoncomp/comparison_rn.hpp"
#include "radoncomp/expr.hpp"
#include "radoncomp/homogeneous.hpp"
#include "radoncomp/kernels.hpp"
#include "radoncomp/report_schema.hpp"
#include "radoncomp/spherical_radon.hpp"

namespace radoncomp {

using nlohmann::json;

namespace {

const std::set<std::string> kAngular{"x", "y", "z"};
const std::set<std::string> kRadial{"r"};

double to_double(const std::string& s, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || s.find_first_not_of(" \t", used) != std::string::npos) {
    throw Error(ErrorCode::InputInvalid, "'" + key + "' is not a number: '" + s + "'");
  }
  return v;
}

int to_int(const std::string& s, const std::string& key) {
  const double v = to_double(s, key);
  if (v != static_cast<int>(v)) throw Error(ErrorCode::InputInvalid, "'" + key + "' must be an integer");
  return static_cast<int>(v);
}

bool to_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw Error(ErrorCode::InputInvalid, "'" + key + "' must be true or false");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json opt_num(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json cert_json(const std::string& name, const PDCertificate& c) {
  return {{"name", name},
          {"verdict", to_string(c.verdict)},
          {"witness_point", vec_json(c.witness_point)},
          {"witness_value", c.witness_value},
          {"witness_t", opt_num(c.witness_t)},
          {"tolerance", c.tolerance},
          {"max_abs", c.max_abs}};
}

json cert_json(const std::string& name, const IntersectionCertificate& c) {
  return {{"name", name},
          {"verdict", to_string(c.overall)},
          {"witness_point", vec_json(c.directions.dirs[c.witness_direction])},
          {"witness_value", c.witness_value},
          {"witness_t", c.witness_t},
          {"tolerance", c.tolerance},
          {"max_abs", c.per_direction[c.witness_direction].max_abs}};
}

int exit_for(ComparisonStatus s) {
  switch (s) {
    case ComparisonStatus::Verified: return kExitOk;
    case ComparisonStatus::DominationFails: return kExitDomination;
    default: return kExitHypothesis;
  }
}

int exit_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotApplicable: return kExitHypothesis;
    case ErrorCode::ConstructionFailed: return kExitConstruction;
    default: return kExitInputError;
  }
}

struct Key {
  std::string name;
  enum { Angular, Radial, Catalog } domain;
  bool required;
};

std::vector<Key> keys_for(const ScenarioConfig& c) {
  const std::string& k = c.kind;
  if (k == "spherical-compare") return {{"f", Key::Angular, true}, {"g", Key::Angular, true}};
  if (k == "spherical-counterexample") return {{c.p > 1.0 ? "g" : "f", Key::Angular, true}};
  if (k == "slicing" || k == "certify-pd") return {{"f", Key::Angular, true}};
  if (k == "intersection-body") return {{"rho", Key::Angular, true}};
  if (k == "rn-compare") {
    return {{"phi", Key::Radial, true}, {"psi", Key::Radial, true}, {"phi_angular", Key::Angular, false},
            {"psi_angular", Key::Angular, false}};
  }
  if (k == "rn-counterexample") return {{"psi", Key::Radial, true}, {"psi_angular", Key::Angular, false}};
  if (k == "certify-intersection") return {{"f", Key::Radial, true}, {"f_angular", Key::Angular, false}};
  if (k == "catalog-verify") return {{"entry", Key::Catalog, true}, {"ell", Key::Angular, false}};
  return {};
}

// Everything a scenario reads from [functions], parsed and checked up front.
struct Inputs {
  std::map<std::string, Expr> exprs;
  bool has(const std::string& k) const { return exprs.count(k) > 0; }
  const Expr& at(const std::string& k) const { return exprs.at(k); }
};

Inputs check_inputs(const ScenarioConfig& cfg) {
  Inputs in;
  const std::vector<Key> keys = keys_for(cfg);
  std::set<std::string> known;
  for (const Key& key : keys) {
    known.insert(key.name);
    auto it = cfg.functions.find(key.name);
    if (it == cfg.functions.end()) {
      if (key.required) throw Error(ErrorCode::InputInvalid, "[functions] needs '" + key.name + "' for " + cfg.kind);
      continue;
    }
    Expr e = Expr::parse(it->second);
    if (key.domain == Key::Angular) {
      e.require_domain(kAngular, "an angular expression ('" + key.name + "')");
      check_even(e);
    } else if (key.domain == Key::Radial) {
      if (!e.catalog()) e.require_domain(kRadial, "a radial expression ('" + key.name + "')");
    } else if (!e.catalog()) {
      throw Error(ErrorCode::InputInvalid, "'" + key.name + "' must be a catalog reference such as catalog:gauss-r2(1)");
    }
    in.exprs.emplace(key.name, std::move(e));
  }
  for (const auto& [k, v] : cfg.functions) {
    if (!known.count(k)) throw Error(ErrorCode::InputInvalid, "unused function key '" + k + "' for " + cfg.kind);
  }
  return in;
}

SphericalFunction sphere_fn(const Expr& e, const GridPtr& grid) {
  return SphericalFunction::sample(grid, [&](const Vec3& u) { return e.angular(u); }, Parity::Even);
}

SeparableFunction rn_fn(const Inputs& in, const std::string& key, const ScenarioConfig& cfg) {
  const Expr& e = in.at(key);
  const std::string ang = key + "_angular";
  if (auto cat = e.catalog()) {
    AngularFn ell;
    if (in.has(ang)) {
      const Expr a = in.at(ang);
      ell = [a](const Vec3& u) { return a.angular(u); };
    }
    return catalog_entry(cat->name, cat->args, ell).f;
  }
  const Expr copy = e;
  RadialProfile prof = RadialProfile::make([copy](double r) { return copy.radial(r); }, e.pretty(), Decay::Schwartz,
                                           cfg.t_grid.T, cfg.t_grid.N);
  prof.breakpoints = e.breakpoints();
  if (!in.has(ang)) return SeparableFunction::radial(std::move(prof));
  const GridPtr grid = build_grid(cfg.n_polar, cfg.n_azimuth);
  return SeparableFunction::product(std::move(prof), sphere_fn(in.at(ang), grid));
}

json null_block(std::initializer_list<const char*> names) {
  json j = json::object();
  for (const char* n : names) j[n] = nullptr;
  return j;
}

struct Writer {
  std::filesystem::path dir;
  std::vector<std::string> files;

  std::string path(const std::string& name) {
    files.push_back(name);
    return (dir / name).string();
  }
};

std::vector<SeparableFunction> witness_tests() {
  std::vector<SeparableFunction> tests{symmetric_gaussian(1.0, Vec3{0.0, 0.0, 0.0})};
  for (int i = 1; i < 10; ++i) {
    tests.push_back(symmetric_gaussian(0.5 + 0.25 * i, Vec3{0.3 * (i % 3), 0.2 * (i % 4), 0.1 * i}));
  }
  return tests;
}

double max_rel(const std::vector<double>& a, const std::function<double(std::size_t)>& ref) {
  double e = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e = std::max(e, std::abs(a[i] - ref(i)));
    s = std::max(s, std::abs(ref(i)));
  }
  return s > 0.0 ? e / s : e;
}

void write_profile_csv(const std::string& path, const SeparableFunction& f, const LineGrid& lg) {
  std::vector<double> r = lg.positive();
  std::vector<double> v(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) v[i] = f(Vec3{0.0, 0.0, r[i]});
  write_series_csv(path, r, v, "r");
}

void write_witness_row(Writer& w, const IntersectionCertificate& c) {
  const std::size_t h = static_cast<std::size_t>(c.t_grid.half());
  const auto* row = c.M.data() + c.witness_direction * h;
  write_series_csv(w.path("transform_1d.csv"), c.t_grid.positive(), std::vector<double>(row, row + h));
}

// ---------------------------------------------------------------------------

struct Outcome {
  int exit_code = kExitOk;
  std::string status;
  json certificates = json::array();
  json norms = null_block({"lp_f", "lp_g"});
  json margins = null_block({"domination", "norm_gap"});
  json residuals = null_block({"parseval", "fourier_slice", "pairing"});
  json details = json::object();
};

void run_spherical_compare(const ScenarioConfig& cfg, const Inputs& in, double ts, Writer& w, Outcome& o) {
  const GridPtr grid = build_grid(cfg.n_polar, cfg.n_azimuth);
  const SphericalFunction f = sphere_fn(in.at("f"), grid);
  const SphericalFunction g = sphere_fn(in.at("g"), grid);
  ComparisonOptions co;
  co.l_max = cfg.l_max;
  co.tol = cfg.rel_tol * ts;
  const ComparisonReport r = verify_comparison_spherical(f, g, cfg.p, co);
  o.status = to_string(r.status);
  o.exit_code = exit_for(r.status);
  if (r.has_certificate) o.certificates.push_back(cert_json(cfg.p > 1.0 ? "f^(p-1)" : "g^(p-1)", r.pd_certificate));
  o.norms = {{"lp_f", r.lp_f}, {"lp_g", r.lp_g}};
  o.margins = {{"domination", r.domination_margin}, {"norm_gap", r.lp_f - r.lp_g}};
  if (cfg.p < 3.0) o.residuals["parseval"] = spherical_parseval_check(f, g, cfg.p, cfg.l_max).residual;
  o.residuals["pairing"] = r.pairing_residual;
  o.details = {{"domination_tol", r.domination_tol}, {"direct_margin", r.direct_margin},
               {"hypothesis_holds", r.hypothesis_holds}, {"conclusion_holds", r.conclusion_holds},
               {"int_power", r.int_power}, {"int_mixed", r.int_mixed}, {"holder_slack", r.holder_slack},
               {"fubini_residual", r.fubini_residual}};
  write_sphere_csv(w.path("f.csv"), f);
  write_sphere_csv(w.path("g.csv"), g);
  if (r.has_certificate && r.pd_certificate.transform) write_sphere_csv(w.path("certificate.csv"), *r.pd_certificate.transform);
}

void run_spherical_counterexample(const ScenarioConfig& cfg, const Inputs& in, double ts, Writer& w, Outcome& o) {
  const GridPtr grid = build_grid(cfg.n_polar, cfg.n_azimuth);
  const std::string key = cfg.p > 1.0 ? "g" : "f";
  const SphericalFunction input = sphere_fn(in.at(key), grid);
  ComparisonOptions co;
  co.l_max = cfg.l_max;
  co.tol = cfg.rel_tol * ts;
  const SphericalCounterexample ce = construct_counterexample_spherical(input, cfg.p, co);
  const ComparisonReport& r = ce.report;
  o.status = "constructed";
  if (r.has_certificate) o.certificates.push_back(cert_json("constructed pair", r.pd_certificate));
  o.norms = {{"lp_f", r.lp_f}, {"lp_g", r.lp_g}};
  o.margins = {{"domination", r.domination_margin}, {"norm_gap", ce.norm_gap}};
  o.residuals["parseval"] = spherical_parseval_check(ce.f, ce.g, cfg.p, cfg.l_max).residual;
  o.details = {{"eps", ce.eps},          {"delta", ce.delta},
               {"lift", ce.lift},        {"halvings", ce.halvings},
               {"min_positive", ce.min_positive}, {"domination_tol", r.domination_tol},
               {"direct_margin", r.direct_margin}};
  write_sphere_csv(w.path("f.csv"), ce.f);
  write_sphere_csv(w.path("g.csv"), ce.g);
  write_sphere_csv(w.path("psi.csv"), ce.psi);
}

void run_slicing(const ScenarioConfig& cfg, const Inputs& in, double, Writer& w, Outcome& o) {
  const GridPtr grid = build_grid(cfg.n_polar, cfg.n_azimuth);
  const SphericalFunction f = sphere_fn(in.at("f"), grid);
  const SlicingReport r = slicing_check(f, cfg.p, cfg.dual, cfg.l_max);
  o.status = r.holds ? "holds" : (r.hypothesis_holds ? "fails" : "hypothesis-fails");
  o.exit_code = r.holds ? kExitOk : kExitHypothesis;
  o.certificates.push_back(cert_json("f^(p-1)", r.certificate));
  o.norms["lp_f"] = r.lhs;
  o.details = {{"lhs", r.lhs},
               {"rhs", r.rhs},
               {"margin", r.margin},
               {"dual", r.dual},
               {"extremal_direction", vec_json(r.extremal_direction)},
               {"extremal_value", r.extremal_value},
               {"hypothesis_holds", r.hypothesis_holds}};
  write_sphere_csv(w.path("f.csv"), f);
  write_sphere_csv(w.path("radon.csv"), sradon(f, cfg.l_max));
}

void run_certify_pd(const ScenarioConfig& cfg, const Inputs& in, double, Writer& w, Outcome& o) {
  const GridPtr grid = build_grid(cfg.n_polar, cfg.n_azimuth);
  const SphericalFunction f = sphere_fn(in.at("f"), grid);
  const PDCertificate c = certify_pd_r1(f, cfg.q, cfg.l_max);
  o.status = to_string(c.verdict);
  o.exit_code = c.positive() ? kExitOk : kExitHypothesis;
  o.certificates.push_back(cert_json("f^q r^-1", c));
  o.details = {{"q", cfg.q},
               {"transform_min", c.transform->min()},
               {"transform_max", c.transform->max()},
               {"truncation_residual", c.truncation_residual}};
  write_sphere_csv(w.path("transform.csv"), *c.transform);
}

void run_intersection_body(const ScenarioConfig& cfg, const Inputs& in, double, Writer& w, Outcome& o) {
  const GridPtr grid = build_grid(cfg.n_polar, cfg.n_azimuth);
  const StarBody L = make_star_body(sphere_fn(in.at("rho"), grid), "L");
  const IntersectionBodyResult r = intersection_body_of(L);
  o.status = "computed";
  o.details = {{"spectral_residual", r.spectral_residual},
               {"rho_min", r.body.radial.min()},
               {"rho_max", r.body.radial.max()}};
  write_sphere_csv(w.path("body.csv"), r.body.radial);
}

RnComparisonOptions rn_options(const ScenarioConfig& cfg, double ts) {
  RnComparisonOptions ro;
  ro.certify.grid = cfg.t_grid;
  ro.certify.dir_polar = cfg.dir_polar;
  ro.certify.dir_azimuth = cfg.dir_azimuth;
  ro.certify.rel_tol = cfg.rel_tol * ts;
  ro.certify.spatial_fallback = cfg.spatial_fallback;
  ro.domination_rel_tol = cfg.domination_tol * ts;
  return ro;
}

void fill_rn_report(const RnComparisonReport& r, Outcome& o) {
  if (r.has_certificate) o.certificates.push_back(cert_json(r.p > 1.0 ? "phi^(p-1)" : "psi^(p-1)", r.certificate));
  o.norms = {{"lp_f", r.lp_phi}, {"lp_g", r.lp_psi}};
  o.margins = {{"domination", r.domination_margin}, {"norm_gap", r.lp_phi - r.lp_psi}};
  o.residuals["fourier_slice"] = r.fourier_slice_residual >= 0.0 ? json(r.fourier_slice_residual) : json(nullptr);
  o.residuals["pairing"] = r.pairing_residual;
  o.details = {{"domination_tol", r.domination_tol},     {"hypothesis_holds", r.hypothesis_holds},
               {"conclusion_holds", r.conclusion_holds}, {"int_power", r.int_power},
               {"int_mixed", r.int_mixed},               {"holder_slack", r.holder_slack},
               {"fubini_residual", r.fubini_residual},   {"norm_ratio_p", std::pow(r.lp_psi / r.lp_phi, r.p)},
               {"route", r.has_certificate ? json(r.certificate.route) : json(nullptr)}};
}

void run_rn_compare(const ScenarioConfig& cfg, const Inputs& in, double ts, Writer& w, Outcome& o) {
  const SeparableFunction phi = rn_fn(in, "phi", cfg);
  const SeparableFunction psi = rn_fn(in, "psi", cfg);
  const RnComparisonOptions ro = rn_options(cfg, ts);
  const RnComparisonReport r = verify_comparison_radon(phi, psi, cfg.p, ro);
  o.status = to_string(r.status);
  o.exit_code = exit_for(r.status);
  fill_rn_report(r, o);
  const DirectionSet dirs = DirectionSet::hemisphere(cfg.dir_polar, cfg.dir_azimuth);
  write_sinogram_csv(w.path("sinogram_phi.csv"), radon_transform(phi, cfg.t_grid, dirs));
  write_sinogram_csv(w.path("sinogram_psi.csv"), radon_transform(psi, cfg.t_grid, dirs));
  if (r.has_certificate) write_witness_row(w, r.certificate);
}

void run_rn_counterexample(const ScenarioConfig& cfg, const Inputs& in, double ts, Writer& w, Outcome& o) {
  const SeparableFunction psi = rn_fn(in, "psi", cfg);
  const RnComparisonOptions ro = rn_options(cfg, ts);
  const RnCounterexample ce = construct_counterexample_radon(psi, cfg.p, ro);
  o.status = "constructed";
  fill_rn_report(ce.report, o);
  o.margins["norm_gap"] = ce.norm_gap;
  o.details["eta"] = ce.eta;
  o.details["halvings"] = ce.halvings;
  o.details["window_center"] = ce.window_center;
  o.details["window_width"] = ce.window_width;
  o.details["lattice_size"] = ce.lattice_size;
  o.details["failing_directions"] = ce.gamma.size();
  o.details["min_phi"] = ce.min_phi;
  const DirectionSet dirs = DirectionSet::hemisphere(cfg.dir_polar, cfg.dir_azimuth);
  write_profile_csv(w.path("phi_profile.csv"), ce.phi, cfg.t_grid);
  write_profile_csv(w.path("h_profile.csv"), ce.h, cfg.t_grid);
  write_sinogram_csv(w.path("sinogram_phi.csv"), radon_transform(ce.phi, cfg.t_grid, dirs));
  write_sinogram_csv(w.path("sinogram_psi.csv"), radon_transform(psi, cfg.t_grid, dirs));
}

void run_certify_intersection(const ScenarioConfig& cfg, const Inputs& in, double ts, Writer& w, Outcome& o) {
  const SeparableFunction f = rn_fn(in, "f", cfg);
  const RnComparisonOptions ro = rn_options(cfg, ts);
  const IntersectionCertificate c = certify_intersection_function(f, ro.certify);
  o.status = to_string(c.overall);
  o.exit_code = c.positive() ? kExitOk : kExitHypothesis;
  o.certificates.push_back(cert_json("f", c));
  o.details = {{"route", c.route}, {"failing_directions", c.failing.size()}, {"directions", c.directions.size()}};
  if (f.decay() == Decay::Schwartz) {
    const Sinogram a = radon_transform(f, cfg.t_grid, c.directions);
    const Sinogram b = radon_via_fourier(f, cfg.t_grid, c.directions);
    o.residuals["fourier_slice"] = max_rel(a.values, [&](std::size_t i) { return b.values[i]; });
  }
  write_witness_row(w, c);
}

void run_catalog_verify(const ScenarioConfig& cfg, const Inputs& in, double ts, Writer& w, Outcome& o) {
  const CatalogRef ref = *in.at("entry").catalog();
  AngularFn ell;
  if (in.has("ell")) {
    const Expr a = in.at("ell");
    ell = [a](const Vec3& u) { return a.angular(u); };
  }
  const CatalogEntry e = catalog_entry(ref.name, ref.args, ell);
  const RnComparisonOptions ro = rn_options(cfg, ts);
  const IntersectionCertificate c = certify_intersection_function(e.f, ro.certify);
  o.certificates.push_back(cert_json(ref.name, c));

  const std::vector<double> t = cfg.t_grid.positive();
  const std::size_t h = t.size();
  const double m_res =
      max_rel(c.m, [&](std::size_t i) { return e.m(t[i % h], c.directions.dirs[i / h]); });
  const double M_res =
      max_rel(c.M, [&](std::size_t i) { return e.M(t[i % h], c.directions.dirs[i / h]); });

  const Sinogram g = e.sinogram(cfg.t_grid, c.directions);
  const SeparableTerm term = e.f.terms()[0];
  const IntersectionFunctionResult ifr =
      intersection_function_of(g, {0.5, 1.0, 2.0, 4.0}, build_grid(4, 8), term.fourier);

  o.residuals["fourier_slice"] = *ifr.relation_residual;
  bool ok = c.positive() == e.intersection && m_res <= 1e-6 * ts && M_res <= 1e-6 * ts &&
            *ifr.relation_residual <= 1e-5 * ts && ifr.route_agreement <= 1e-5 * ts;
  o.details = {{"expected_intersection", e.intersection},
               {"m_residual", m_res},
               {"M_residual", M_res},
               {"relation_residual", *ifr.relation_residual},
               {"route_agreement", ifr.route_agreement}};
  if (c.positive() && !ell) {
    const WitnessResult wr = classification_witness(e.f, c, witness_tests());
    o.residuals["pairing"] = wr.max_residual;
    o.details["calibration"] = wr.calibration;
    o.details["measure_min"] = wr.measure_min;
    o.details["theta_spread"] = wr.theta_spread;
    ok = ok && wr.max_residual <= 1e-4 * ts;
  }
  if (!c.positive()) {
    o.status = to_string(c.overall);
    o.exit_code = kExitHypothesis;
  } else {
    o.status = ok ? "verified" : "residual-check-failed";
    o.exit_code = ok ? kExitOk : kExitHypothesis;
  }
  write_witness_row(w, c);
  write_sinogram_csv(w.path("data_sinogram.csv"), g);
}

using Runner = void (*)(const ScenarioConfig&, const Inputs&, double, Writer&, Outcome&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> r{
      {"spherical-compare", run_spherical_compare},
      {"spherical-counterexample", run_spherical_counterexample},
      {"slicing", run_slicing},
      {"rn-compare", run_rn_compare},
      {"rn-counterexample", run_rn_counterexample},
      {"certify-pd", run_certify_pd},
      {"certify-intersection", run_certify_intersection},
      {"intersection-body", run_intersection_body},
      {"catalog-verify", run_catalog_verify},
  };
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

json inputs_json(const ScenarioConfig& cfg, const Inputs* in) {
  json fns = json::object();
  for (const auto& [k, v] : cfg.functions) fns[k] = v;
  if (in) {
    for (const auto& [k, e] : in->exprs) fns[k] = e.pretty();
  }
  return {{"functions", fns},
          {"p", cfg.p},
          {"q", cfg.q},
          {"dual", cfg.dual},
          {"grid",
           {{"n_polar", cfg.n_polar},
            {"n_azimuth", cfg.n_azimuth},
            {"l_max", cfg.l_max},
            {"t_max", cfg.t_grid.T},
            {"t_points", cfg.t_grid.N},
            {"dir_polar", cfg.dir_polar},
            {"dir_azimuth", cfg.dir_azimuth},
            {"spatial_fallback", cfg.spatial_fallback}}},
          {"tolerances", {{"rel", cfg.rel_tol}, {"domination", cfg.domination_tol}}}};
}

}  // namespace

const std::vector<std::string>& scenario_kinds() {
  static const std::vector<std::string> k{"spherical-compare", "spherical-counterexample", "slicing",
                                          "rn-compare",        "rn-counterexample",        "certify-pd",
                                          "certify-intersection", "intersection-body",     "catalog-verify"};
  return k;
}

ScenarioConfig parse_config(const std::string& text, const std::string& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::InputInvalid, std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  ScenarioConfig c;
  c.source = text;
  c.path = path;
  // [functions] keys are checked per kind when the scenario runs
  const std::map<std::string, std::set<std::string>> sections{
      {"scenario", {"kind", "description", "p", "q", "dual"}},
      {"grid", {"n_polar", "n_azimuth", "l_max", "t_max", "t_points", "dir_polar", "dir_azimuth", "spatial_fallback"}},
      {"functions", {}},
      {"tolerances", {"rel", "domination"}},
      {"output", {"dir"}},
  };
  for (const auto& [name, sub] : tree) {
    auto it = sections.find(name);
    if (it == sections.end()) throw Error(ErrorCode::InputInvalid, "config: unknown section [" + name + "]");
    if (name == "functions") continue;
    for (const auto& [key, value] : sub) {
      if (!it->second.count(key)) throw Error(ErrorCode::InputInvalid, "config: unknown key '" + key + "' in [" + name + "]");
    }
  }
  auto get = [&](const char* section, const char* key) -> std::optional<std::string> {
    auto s = tree.get_child_optional(section);
    if (!s) return std::nullopt;
    auto v = s->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return *v;
  };
  auto kind = get("scenario", "kind");
  if (!kind) throw Error(ErrorCode::InputInvalid, "config: [scenario] kind is required");
  c.kind = *kind;
  if (!runners().count(c.kind)) throw Error(ErrorCode::InputInvalid, "config: unknown scenario kind '" + c.kind + "'");
  if (auto v = get("scenario", "description")) c.description = *v;
  if (auto v = get("scenario", "p")) c.p = to_double(*v, "p");
  if (auto v = get("scenario", "q")) c.q = to_double(*v, "q");
  if (auto v = get("scenario", "dual")) c.dual = to_bool(*v, "dual");
  if (auto v = get("grid", "n_polar")) c.n_polar = to_int(*v, "n_polar");
  if (auto v = get("grid", "n_azimuth")) c.n_azimuth = to_int(*v, "n_azimuth");
  if (auto v = get("grid", "l_max")) c.l_max = to_int(*v, "l_max");
  if (auto v = get("grid", "t_max")) c.t_grid.T = to_double(*v, "t_max");
  if (auto v = get("grid", "t_points")) c.t_grid.N = to_int(*v, "t_points");
  if (auto v = get("grid", "dir_polar")) c.dir_polar = to_int(*v, "dir_polar");
  if (auto v = get("grid", "dir_azimuth")) c.dir_azimuth = to_int(*v, "dir_azimuth");
  if (auto v = get("grid", "spatial_fallback")) c.spatial_fallback = to_bool(*v, "spatial_fallback");
  if (auto v = get("tolerances", "rel")) c.rel_tol = to_double(*v, "rel");
  if (auto v = get("tolerances", "domination")) c.domination_tol = to_double(*v, "domination");
  if (auto v = get("output", "dir")) c.out_dir = *v;
  if (auto s = tree.get_child_optional("functions")) {
    for (const auto& [k, v] : *s) c.functions[k] = v.get_value<std::string>();
  }
  if (!(c.p > 0.0)) throw Error(ErrorCode::InputInvalid, "config: p must be positive");
  if (c.t_grid.N < 8 || c.t_grid.N % 2 != 0 || !(c.t_grid.T > 0.0)) {
    throw Error(ErrorCode::InputInvalid, "config: t grid needs an even t_points >= 8 and t_max > 0");
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InputInvalid, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  if (opt.threads > 0) kernels::set_threads(opt.threads);
  const double ts = opt.tol_scale;
  if (!(ts > 0.0)) throw Error(ErrorCode::InputInvalid, "tol-scale must be positive");

  Writer w;
  w.dir = opt.out_dir.empty() ? cfg.out_dir : opt.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(w.dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + w.dir.string() + ": " + ec.message());

  Outcome o;
  json error = nullptr;
  std::optional<Inputs> inputs;
  try {
    inputs = check_inputs(cfg);
    runners().at(cfg.kind)(cfg, *inputs, ts, w, o);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    o.exit_code = exit_for(e.code());
    o.status = e.code() == ErrorCode::NotApplicable        ? "not-applicable"
               : e.code() == ErrorCode::ConstructionFailed ? "construction-failed"
                                                           : "input-error";
    error = {{"code", to_string(e.code())}, {"message", e.what()}};
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunResult res;
  res.exit_code = o.exit_code;
  res.report = {{"scenario", {{"kind", cfg.kind}, {"description", cfg.description}}},
                {"inputs", inputs_json(cfg, inputs ? &*inputs : nullptr)},
                {"status", o.status},
                {"exit_code", o.exit_code},
                {"error", error},
                {"certificates", o.certificates},
                {"norms", o.norms},
                {"margins", o.margins},
                {"residuals", o.residuals},
                {"details", o.details},
                {"timing", {{"wall_seconds", wall}, {"threads", kernels::threads()}}}};
  write_text(w.path("report.json"), res.report.dump(2) + "\n");

  const json manifest = {{"tool", "radoncomp"},
                         {"version", RADONCOMP_VERSION},
                         {"boost", BOOST_LIB_VERSION},
                         {"compiler", __VERSION__},
                         {"config_path", cfg.path},
                         {"config", cfg.source},
                         {"kind", cfg.kind},
                         {"exit_code", o.exit_code},
                         {"files", w.files},
                         {"wall_seconds", wall},
                         {"threads", kernels::threads()}};
  write_text((w.dir / "manifest.json").string(), manifest.dump(2) + "\n");
  w.files.push_back("manifest.json");
  res.files = w.files;
  return res;
}

const char* report_schema_text() { return kReportSchema; }

void write_sphere_csv(const std::string& path, const SphericalFunction& f) {
  std::ostringstream out;
  out << "node,x,y,z,weight,value\n";
  const GridPtr& g = f.grid();
  for (std::size_t n = 0; n < g->size(); ++n) {
    const Vec3& u = g->nodes()[n];
    out << n << ',' << fmt(u.x) << ',' << fmt(u.y) << ',' << fmt(u.z) << ',' << fmt(g->weights()[n]) << ','
        << fmt(f.values()[n]) << '\n';
  }
  write_text(path, out.str());
}

void write_sinogram_csv(const std::string& path, const Sinogram& s) {
  std::ostringstream out;
  out << "# T=" << fmt(s.t_grid.T) << " dt=" << fmt(s.t_grid.dt()) << " N=" << s.t_grid.N
      << " directions=" << s.directions.size() << "\n";
  out << "# columns: theta_x,theta_y,theta_z, then R(t_i) for t_i = -T + (i + 1/2) dt\n";
  for (std::size_t d = 0; d < s.directions.size(); ++d) {
    const Vec3& u = s.directions.dirs[d];
    out << fmt(u.x) << ',' << fmt(u.y) << ',' << fmt(u.z);
    for (int i = 0; i < s.t_grid.N; ++i) out << ',' << fmt(s.at(d, i));
    out << '\n';
  }
  write_text(path, out.str());
}

void write_series_csv(const std::string& path, const std::vector<double>& x, const std::vector<double>& y,
                      const char* x_name) {
  std::ostringstream out;
  out << x_name << ",value\n";
  for (std::size_t i = 0; i < x.size(); ++i) out << fmt(x[i]) << ',' << fmt(y[i]) << '\n';
  write_text(path, out.str());
}

}  // namespace radoncomp
