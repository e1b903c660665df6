#include "radoncomp/spherical_radon.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radoncomp/kernels.hpp"

namespace radoncomp {

namespace {

int default_degree(const SphericalFunction& f) {
  if (f.spectrum()) return f.spectrum()->l_max();
  return (f.grid()->bandwidth() + 1) / 2;
}

HarmonicSpectrum spectrum_of(const SphericalFunction& f, int l_max) {
  if (l_max < 0) {
    if (f.spectrum()) return *f.spectrum();
    return analyze(f);
  }
  if (f.spectrum() && f.spectrum()->l_max() == l_max) return *f.spectrum();
  return analyze(f, l_max);
}

std::vector<Vec3> hemisphere_directions(int n_polar) {
  const GridPtr g = build_grid(n_polar, 2 * n_polar);
  std::vector<Vec3> out;
  for (std::size_t n : g->hemisphere()) out.push_back(g->nodes()[n]);
  return out;
}

double lp_power(const SphericalFunction& f, double p) {
  const auto& w = f.grid()->weights();
  double acc = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) acc += w[n] * std::pow(f.values()[n], p);
  return acc;
}

double mixed_integral(const SphericalFunction& a, double q, const SphericalFunction& b) {
  const auto& w = a.grid()->weights();
  double acc = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) acc += w[n] * std::pow(a.values()[n], q) * b.values()[n];
  return acc;
}

double spectral_dot(const HarmonicSpectrum& a, const HarmonicSpectrum& b) {
  const int L = std::min(a.l_max(), b.l_max());
  double acc = 0.0;
  for (std::size_t i = 0; i < HarmonicSpectrum::count(L); ++i) acc += a.coeffs()[i] * b.coeffs()[i];
  return acc;
}

SphericalFunction with_values(const SphericalFunction& like, std::vector<double> v) {
  return SphericalFunction(like.grid(), std::move(v), Parity::None);
}

}  // namespace

double sradon_direct(const SphericalFunction& f, const Vec3& xi, int n_circle) {
  return sradon_direct_many(f, {xi}, n_circle).front();
}

std::vector<double> sradon_direct_many(const SphericalFunction& f, const std::vector<Vec3>& xis, int n_circle) {
  const HarmonicSpectrum s = spectrum_of(f, -1);
  if (n_circle <= 0) n_circle = std::max(64, 2 * s.l_max() + 2);
  const auto nc = static_cast<std::size_t>(n_circle);
  std::vector<double> values(xis.size() * nc);
  const auto nd = static_cast<long>(xis.size());
#pragma omp parallel for schedule(static) num_threads(kernels::threads())
  for (long d = 0; d < nd; ++d) {
    Vec3 e1;
    Vec3 e2;
    orthonormal_frame(normalized(xis[static_cast<std::size_t>(d)]), e1, e2);
    for (std::size_t j = 0; j < nc; ++j) {
      const double a = kTwoPi * static_cast<double>(j) / static_cast<double>(nc);
      values[static_cast<std::size_t>(d) * nc + j] = evaluate(s, e1 * std::cos(a) + e2 * std::sin(a));
    }
  }
  std::vector<double> out(xis.size());
  kernels::CircleSums cs{xis.size(), nc, values.data()};
  kernels::omp::circle_sums(cs, out.data());
  return out;
}

HarmonicSpectrum sradon_spectral(const HarmonicSpectrum& f) {
  const MultiplierTable table(kDim, f.l_max());
  return f.scaled_by_degree(table.funk());
}

SphericalFunction sradon(const SphericalFunction& f, int l_max) {
  return synthesize(sradon_spectral(spectrum_of(f, l_max)), f.grid());
}

const char* to_string(ComparisonStatus s) {
  switch (s) {
    case ComparisonStatus::Verified: return "verified";
    case ComparisonStatus::HypothesisFails: return "hypothesis-fails";
    case ComparisonStatus::DominationFails: return "domination-fails";
    case ComparisonStatus::ConclusionFails: return "conclusion-fails";
  }
  return "?";
}

ComparisonReport verify_comparison_spherical(const SphericalFunction& f, const SphericalFunction& g, double p,
                                             const ComparisonOptions& opt) {
  if (!(p > 0.0)) throw Error(ErrorCode::OutOfRange, "p must be positive");
  if (f.grid()->n_polar() != g.grid()->n_polar() || f.grid()->n_azimuth() != g.grid()->n_azimuth()) {
    throw Error(ErrorCode::GridMismatch, "f and g live on different grids");
  }
  if (!(f.min() > 0.0) || !(g.min() > 0.0)) throw Error(ErrorCode::NotPositive, "f and g must be strictly positive");

  const int bw = f.grid()->bandwidth();
  const int L = opt.l_max >= 0 ? opt.l_max : std::min(bw, std::max(default_degree(f), default_degree(g)));
  const HarmonicSpectrum fs = spectrum_of(f, L);
  const HarmonicSpectrum gs = spectrum_of(g, L);
  const HarmonicSpectrum rfs = sradon_spectral(fs);
  const HarmonicSpectrum rgs = sradon_spectral(gs);
  const SphericalFunction rf = synthesize(rfs, f.grid());
  const SphericalFunction rg = synthesize(rgs, f.grid());

  ComparisonReport rep;
  rep.p = p;
  double margin = rg.values()[0] - rf.values()[0];
  for (std::size_t n = 0; n < rf.values().size(); ++n) margin = std::min(margin, rg.values()[n] - rf.values()[n]);
  rep.domination_margin = margin;
  rep.domination_tol = opt.tol * rg.max_abs();

  {
    SphericalFunction fb = f;
    SphericalFunction gb = g;
    fb.with_spectrum(fs);
    gb.with_spectrum(gs);
    const auto dirs = hemisphere_directions(opt.direct_grid_polar);
    const auto a = sradon_direct_many(fb, dirs);
    const auto b = sradon_direct_many(gb, dirs);
    double m = b[0] - a[0];
    for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, b[i] - a[i]);
    rep.direct_margin = m;
  }

  rep.lp_f = lp_norm_sphere(f, p);
  rep.lp_g = lp_norm_sphere(g, p);
  const double norm_tol = opt.tol * std::max(1.0, rep.lp_g);

  if (p == 1.0) {
    const double ir = integrate(rf);
    const double i1 = integrate(f);
    rep.fubini_residual = std::abs(ir - kTwoPi * i1) / (kTwoPi * i1);
    rep.hypothesis_holds = true;
    rep.int_power = i1;
    rep.int_mixed = integrate(g);
  } else {
    const SphericalFunction& base = p > 1.0 ? f : g;
    const SphericalFunction& other = p > 1.0 ? g : f;
    const PowerTransform pt = power_transform(base, p - 1.0);
    rep.pd_certificate = certify_pd_r1(base, p - 1.0);
    rep.has_certificate = true;
    rep.hypothesis_holds = rep.pd_certificate.positive();

    rep.int_power = lp_power(base, p);
    rep.int_mixed = mixed_integral(base, p - 1.0, other);
    // (2 pi)^3 int base^{p-1} base = pi int h R(base), read off the spectra
    const double replay = kPi * spectral_dot(pt.transform, p > 1.0 ? rfs : rgs) / std::pow(kTwoPi, 3);
    rep.pairing_residual = std::abs(replay - rep.int_power) / std::abs(rep.int_power);
    if (p > 1.0) {
      rep.holder_slack = std::pow(rep.lp_f, p - 1.0) * rep.lp_g - rep.int_mixed;
    } else {
      const SphericalFunction w = g.map([p](double v) { return std::pow(v, p - 1.0); });
      rep.holder_slack = reverse_holder_check(f, w, 1.0 / p).margin;
    }
  }

  rep.conclusion_holds = rep.lp_f <= rep.lp_g + norm_tol;
  if (rep.domination_margin < -rep.domination_tol) {
    rep.status = ComparisonStatus::DominationFails;
  } else if (!rep.hypothesis_holds) {
    rep.status = ComparisonStatus::HypothesisFails;
  } else {
    rep.status = rep.conclusion_holds ? ComparisonStatus::Verified : ComparisonStatus::ConclusionFails;
  }
  return rep;
}

SphericalCounterexample construct_counterexample_spherical(const SphericalFunction& input, double p,
                                                           const ComparisonOptions& opt) {
  if (!(p > 0.0) || p == 1.0) throw Error(ErrorCode::OutOfRange, "construction needs p > 0, p != 1");
  if (!(input.min() > 0.0)) throw Error(ErrorCode::NotPositive, "input must be strictly positive");
  const bool case_a = p > 1.0;
  const GridPtr& grid = input.grid();
  const int L = opt.l_max >= 0 ? opt.l_max : default_degree(input);

  const PDCertificate cert = certify_pd_r1(input, p - 1.0);
  if (cert.verdict != Verdict::NotPositiveDefinite) {
    throw Error(ErrorCode::NotApplicable, std::string("power certificate is ") + to_string(cert.verdict));
  }
  const SphericalFunction& h = *cert.transform;

  SphericalCounterexample out;
  out.delta = 0.1 * std::abs(h.min());
  const double delta = out.delta;
  const SphericalFunction psi0 = h.map([delta](double v) {
    const double b = std::max(0.0, -v - delta);
    return b * b * b;
  });
  HarmonicSpectrum psi_s = analyze(psi0, L).even_part();
  {
    const SphericalFunction trial = synthesize(psi_s, grid);
    out.lift = std::max(0.0, -trial.min());
    psi_s(0, 0) += out.lift * std::sqrt(kFourPi);
  }
  out.psi = synthesize(psi_s, grid);
  const HarmonicSpectrum phi_s = fourier_homogeneous(psi_s, 1.0);
  out.phi = synthesize(phi_s, grid);

  const HarmonicSpectrum in_s = spectrum_of(input, L);
  const double sign = case_a ? -1.0 : 1.0;
  double eps = 0.5 * input.min() / out.phi.max_abs();
  for (int halving = 0; halving <= 20; ++halving, eps *= 0.5) {
    std::vector<double> v(input.values().size());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = input.values()[n] + sign * eps * out.phi.values()[n];
    const double vmin = *std::min_element(v.begin(), v.end());
    if (!(vmin > 0.0)) continue;
    SphericalFunction built = with_values(input, std::move(v));
    built.with_spectrum(in_s + (sign * eps) * phi_s);

    SphericalFunction in_copy = input;
    in_copy.with_spectrum(in_s);
    const SphericalFunction& f = case_a ? built : in_copy;
    const SphericalFunction& g = case_a ? in_copy : built;
    ComparisonOptions o = opt;
    o.l_max = L;
    ComparisonReport rep = verify_comparison_spherical(f, g, p, o);
    const double gap = rep.lp_f - rep.lp_g;
    const bool dominated = rep.domination_margin >= -rep.domination_tol && rep.direct_margin >= -rep.domination_tol;
    if (dominated && gap > 1e-8) {
      out.f = f;
      out.g = g;
      out.eps = eps;
      out.halvings = halving;
      out.norm_gap = gap;
      out.min_positive = vmin;
      out.report = std::move(rep);
      return out;
    }
  }
  throw Error(ErrorCode::ConstructionFailed,
              "no eps in 20 halvings passed positivity, domination and a norm gap above 1e-8 (delta " +
                  std::to_string(delta) + ", lift " + std::to_string(out.lift) + ")");
}

SlicingReport slicing_check(const SphericalFunction& f, double p, bool dual, int l_max) {
  if (!(p > 0.0) || p == 1.0) throw Error(ErrorCode::OutOfRange, "slicing needs p > 0, p != 1");
  if (!dual && p < 1.0) throw Error(ErrorCode::OutOfRange, "p < 1 needs the dual form");
  if (dual && p > 1.0) throw Error(ErrorCode::OutOfRange, "the dual form needs p < 1");
  SlicingReport rep;
  rep.p = p;
  rep.dual = dual;
  rep.certificate = certify_pd_r1(f, p - 1.0);
  rep.hypothesis_holds = rep.certificate.positive();

  const HarmonicSpectrum rs = sradon_spectral(spectrum_of(f, l_max));
  const SphericalFunction rf = synthesize(rs, f.grid());
  const double sgn = dual ? -1.0 : 1.0;  // maximise sgn * Rf
  std::size_t best = dual ? rf.argmin() : rf.argmax();
  Vec3 u = rf.grid()->nodes()[best];
  double val = rf.values()[best];

  // one Newton step in tangent coordinates, finite-difference derivatives
  {
    Vec3 e1;
    Vec3 e2;
    orthonormal_frame(u, e1, e2);
    const double hs = 1e-3;
    auto F = [&](double a, double b) { return sgn * evaluate(rs, normalized(u + e1 * a + e2 * b)); };
    const double f0 = F(0, 0);
    const double fa = F(hs, 0), fA = F(-hs, 0), fb = F(0, hs), fB = F(0, -hs);
    const double fab = F(hs, hs), faB = F(hs, -hs), fAb = F(-hs, hs), fAB = F(-hs, -hs);
    const double ga = (fa - fA) / (2 * hs);
    const double gb = (fb - fB) / (2 * hs);
    const double haa = (fa - 2 * f0 + fA) / (hs * hs);
    const double hbb = (fb - 2 * f0 + fB) / (hs * hs);
    const double hab = (fab - faB - fAb + fAB) / (4 * hs * hs);
    const double det = haa * hbb - hab * hab;
    if (haa < 0 && det > 0) {
      const double da = -(hbb * ga - hab * gb) / det;
      const double db = -(haa * gb - hab * ga) / det;
      if (std::hypot(da, db) < 0.2) {
        const double fn = F(da, db);
        if (fn > f0) {
          u = normalized(u + e1 * da + e2 * db);
          val = sgn * fn;
        }
      }
    }
  }
  rep.extremal_direction = u;
  rep.extremal_value = val;
  rep.lhs = lp_norm_sphere(f, p);
  rep.rhs = std::pow(kFourPi, 1.0 / p) / kTwoPi * val;
  rep.margin = dual ? rep.lhs - rep.rhs : rep.rhs - rep.lhs;
  rep.holds = rep.margin >= -1e-10 * std::max(rep.lhs, rep.rhs);
  return rep;
}

StarBody make_star_body(SphericalFunction radial, std::string name) {
  if (!(radial.min() > 0.0)) throw Error(ErrorCode::NotPositive, "radial function of a star body must be positive");
  SphericalFunction checked(radial.grid(), radial.values(), Parity::Even);
  if (radial.spectrum()) checked.with_spectrum(*radial.spectrum());
  return StarBody{std::move(checked), std::move(name)};
}

IntersectionBodyResult intersection_body_of(const StarBody& L) {
  const GridPtr& grid = L.radial.grid();
  const int bw = grid->bandwidth();
  const SphericalFunction rho2 = L.radial.map([](double v) { return v * v; });
  const HarmonicSpectrum r2 = analyze(rho2, bw).even_part();
  HarmonicSpectrum ril = sradon_spectral(r2);
  ril *= 0.5;
  SphericalFunction rho_il = synthesize(ril, grid);

  // (rho_IL r^{-1})^ = (2 pi)^3 / (2 pi) rho_L^2 r^{-2}
  const SphericalFunction lhs = synthesize(fourier_homogeneous(analyze(rho_il, bw), 1.0), grid);
  double err = 0.0;
  double scale = 0.0;
  const SphericalFunction rhs = synthesize(r2, grid);
  for (std::size_t n = 0; n < lhs.values().size(); ++n) {
    const double b = 4.0 * kPi * kPi * rhs.values()[n];
    err = std::max(err, std::abs(lhs.values()[n] - b));
    scale = std::max(scale, std::abs(b));
  }
  IntersectionBodyResult res;
  res.spectral_residual = err / scale;
  res.body = make_star_body(std::move(rho_il), "I" + L.name);
  return res;
}

}  // namespace radoncomp
