#include "radoncomp/comparison_rn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radoncomp/kernels.hpp"

namespace radoncomp {

namespace {

int sphere_polar_for(const SeparableFunction& f) { return f.is_radial() ? 4 : 32; }

constexpr int kRadialPanels = 96;

}  // namespace

double power_integral_rn(const SeparableFunction& phi, double p) {
  if (!(p > 0.0)) throw Error(ErrorCode::OutOfRange, "p must be positive");
  const double R = phi.support();
  const auto bps = phi.breakpoints();
  const int sp = sphere_polar_for(phi);
  auto fn = [&](const Vec3& x) { return std::pow(std::abs(phi(x)), p); };
  const double full = integrate_rn(fn, R, kRadialPanels, sp, bps);
  const double inner = integrate_rn(fn, 0.9 * R, kRadialPanels, sp, bps);
  const double tail = std::abs(full - inner);
  if (tail > 1e-6 * std::abs(full)) {
    throw Error(ErrorCode::TailTooHeavy, "outer shell carries " + std::to_string(tail / std::abs(full)) +
                                             " of the L^" + std::to_string(p) + " integral");
  }
  return full;
}

double lp_norm_rn(const SeparableFunction& phi, double p) { return std::pow(power_integral_rn(phi, p), 1.0 / p); }

double sinogram_dominates(const Sinogram& a, const Sinogram& b) {
  if (a.t_grid.N != b.t_grid.N || a.t_grid.T != b.t_grid.T || a.directions.size() != b.directions.size()) {
    throw Error(ErrorCode::GridMismatch, "sinograms live on different grids");
  }
  for (std::size_t d = 0; d < a.directions.size(); ++d) {
    if (norm(a.directions.dirs[d] - b.directions.dirs[d]) > 1e-14) {
      throw Error(ErrorCode::GridMismatch, "sinogram directions differ");
    }
  }
  double m = b.values[0] - a.values[0];
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::min(m, b.values[i] - a.values[i]);
  return m;
}

RnComparisonReport verify_comparison_radon(const SeparableFunction& phi, const SeparableFunction& psi, double p,
                                           const RnComparisonOptions& opt) {
  if (!(p > 0.0)) throw Error(ErrorCode::OutOfRange, "p must be positive");
  RnComparisonReport rep;
  rep.p = p;
  const LineGrid& lg = opt.certify.grid;
  const DirectionSet dirs = DirectionSet::hemisphere(opt.certify.dir_polar, opt.certify.dir_azimuth);
  const Sinogram ra = radon_transform(phi, lg, dirs);
  const Sinogram rb = radon_transform(psi, lg, dirs);
  rep.domination_margin = sinogram_dominates(ra, rb);
  rep.domination_tol = opt.domination_rel_tol * rb.max_abs();
  const bool dominated = rep.domination_margin >= -rep.domination_tol;

  if (phi.decay() == Decay::Schwartz) {
    try {
      const Sinogram rf = radon_via_fourier(phi, lg, dirs);
      double e = 0.0;
      for (std::size_t i = 0; i < ra.values.size(); ++i) e = std::max(e, std::abs(ra.values[i] - rf.values[i]));
      rep.fourier_slice_residual = e / std::max(ra.max_abs(), 1e-300);
    } catch (const Error&) {
      rep.fourier_slice_residual = -1.0;
    }
  }

  rep.int_power = power_integral_rn(phi, p);
  rep.lp_phi = std::pow(rep.int_power, 1.0 / p);
  rep.lp_psi = lp_norm_rn(psi, p);

  if (p == 1.0) {
    // Cavalieri: int R phi(t, theta) dt = int phi for every theta
    const double ipsi = power_integral_rn(psi, 1.0);
    double sino = 0.0;
    const std::vector<double> ma = ra.masses();
    const std::vector<double> mb = rb.masses();
    for (std::size_t d = 0; d < dirs.size(); ++d) sino += dirs.weights[d] * (mb[d] - ma[d]);
    sino /= kFourPi;
    rep.fubini_residual = std::abs((ipsi - rep.int_power) - sino) / std::max(std::abs(ipsi), 1e-300);
    rep.hypothesis_holds = true;
  } else {
    // p < 1 certifies psi^{p-1}; power() rejects the negative exponent.
    const SeparableFunction& base = p > 1.0 ? phi : psi;
    const SeparableFunction fq = base.power(p - 1.0);
    CertifyOptions co = opt.certify;
    co.spatial_fallback = true;
    rep.certificate = certify_intersection_function(fq, co);
    rep.has_certificate = true;
    rep.hypothesis_holds = rep.certificate.positive();
    const int sp = std::max(sphere_polar_for(fq), sphere_polar_for(psi));
    std::vector<double> bps = phi.breakpoints();
    const std::vector<double> b2 = psi.breakpoints();
    bps.insert(bps.end(), b2.begin(), b2.end());
    std::sort(bps.begin(), bps.end());
    rep.int_mixed = integrate_rn([&](const Vec3& x) { return fq(x) * psi(x); }, std::max(phi.support(), psi.support()),
                                 kRadialPanels, sp, bps);
    const double holder = std::pow(rep.lp_phi, p - 1.0) * rep.lp_psi;
    rep.holder_slack = (holder - rep.int_mixed) / std::max(holder, 1e-300);
    if (rep.hypothesis_holds) {
      const WitnessResult w = classification_witness(fq, rep.certificate, {phi});
      rep.pairing_residual = std::abs(w.lhs[0] - w.rhs[0]) / std::max(std::abs(w.lhs[0]), 1e-300);
    }
  }
  rep.conclusion_holds = rep.lp_phi <= rep.lp_psi * (1.0 + 1e-9);
  if (!dominated) {
    rep.status = ComparisonStatus::DominationFails;
  } else if (!rep.hypothesis_holds) {
    rep.status = ComparisonStatus::HypothesisFails;
  } else {
    rep.status = rep.conclusion_holds ? ComparisonStatus::Verified : ComparisonStatus::ConclusionFails;
  }
  return rep;
}

double window_bump(double t, double c, double w) {
  const double u = (t - c) / w;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

SeparableFunction bump_preimage(double c, double w) {
  if (!(w > 0.0 && c - w > 0.0)) throw Error(ErrorCode::InputInvalid, "bump window must lie in t > 0");
  auto h = [c, w](double s) {
    const double u = (s - c) / w;
    if (std::abs(u) >= 1.0) return 0.0;
    const double v = 1.0 - u * u;
    return window_bump(s, c, w) * u / (kPi * s * w * v * v);
  };
  RadialProfile prof = RadialProfile::make(h, "bump-preimage");
  prof.breakpoints = {c - w, c + w};
  SeparableTerm term;
  term.profile = std::move(prof);
  term.radon = [c, w](double t, const Vec3&) { return window_bump(std::abs(t), c, w); };
  return SeparableFunction({term}, "bump-preimage");
}

namespace {

struct Trial {
  double c = 0.0;
  double w = 0.0;
  double eta = 0.0;
  int halvings = 0;
  double gap = -1.0;
  double min_phi = 0.0;
  bool ok = false;
};

Trial run_trial(const SeparableFunction& psi, double p, double c, double w, const std::vector<Vec3>& dirs) {
  Trial tr;
  tr.c = c;
  tr.w = w;
  const SeparableFunction h = bump_preimage(c, w);
  const int ns = 400;
  double hmax = 0.0;
  double psi_min = 0.0;
  bool first = true;
  for (int i = 0; i <= ns; ++i) {
    const double s = c - w + 2.0 * w * i / ns;
    const double hv = h(Vec3{0.0, 0.0, s});
    hmax = std::max(hmax, hv);
    if (hv > 0.0) {
      for (const Vec3& u : dirs) {
        const double v = psi(u * s);
        psi_min = first ? v : std::min(psi_min, v);
        first = false;
      }
    }
  }
  if (!(hmax > 0.0) || !(psi_min > 0.0)) return tr;
  tr.eta = 0.5 * psi_min / hmax;
  for (tr.halvings = 0; tr.halvings <= 20; ++tr.halvings) {
    double mn = 0.0;
    bool firstm = true;
    for (int i = 0; i <= ns; ++i) {
      const double s = c - w + 2.0 * w * i / ns;
      for (const Vec3& u : dirs) {
        const double v = psi(u * s) - tr.eta * h(u * s);
        mn = firstm ? v : std::min(mn, v);
        firstm = false;
      }
    }
    tr.min_phi = mn;
    if (mn >= 0.0) break;
    tr.eta *= 0.5;
  }
  if (tr.min_phi < 0.0) return tr;
  const SeparableFunction phi = psi + h.scaled(-tr.eta);
  const int sp = psi.is_radial() ? 2 : 32;
  tr.gap = integrate_rn(
      [&](const Vec3& x) { return std::pow(std::max(phi(x), 0.0), p) - std::pow(std::max(psi(x), 0.0), p); }, c + w,
      kRadialPanels, sp, {c - w, c + w});
  tr.ok = tr.gap > 1e-8;
  return tr;
}

}  // namespace

RnCounterexample construct_counterexample_radon(const SeparableFunction& psi, double p, const RnComparisonOptions& opt) {
  if (p == 1.0) throw Error(ErrorCode::NotApplicable, "the comparison holds at p = 1");
  if (!(p > 0.0)) throw Error(ErrorCode::OutOfRange, "p must be positive");
  // For p < 1 the input plays the role of phi and phi^{p-1} must be certified;
  // power() rejects it for decaying inputs.
  const SeparableFunction fq = psi.power(p - 1.0);
  if (p < 1.0) throw Error(ErrorCode::NotApplicable, "no decaying input has an admissible negative power");
  CertifyOptions co = opt.certify;
  co.spatial_fallback = true;
  const IntersectionCertificate cert = certify_intersection_function(fq, co);
  if (cert.overall != Verdict::NotPositiveDefinite) {
    throw Error(ErrorCode::NotApplicable, std::string("psi^{p-1} certificate is ") + to_string(cert.overall));
  }

  RnCounterexample out;
  out.psi = psi;
  out.gamma = cert.failing;

  // direction-averaged transform; a radial h sees exactly this average
  const std::vector<double> t = cert.t_grid.positive();
  const std::size_t hn = t.size();
  std::vector<double> avg(hn, 0.0);
  double wsum = 0.0;
  for (std::size_t d = 0; d < cert.directions.size(); ++d) {
    const double wd = cert.directions.weights[d];
    wsum += wd;
    for (std::size_t j = 0; j < hn; ++j) avg[j] += wd * cert.M[d * hn + j];
  }
  double amax = 0.0;
  for (double& v : avg) {
    v /= wsum;
    amax = std::max(amax, std::abs(v));
  }

  // most negative window of the averaged transform
  double best_mass = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t j = 0; j < hn;) {
    if (avg[j] < -1e-8 * amax) {
      std::size_t k = j;
      double mass = 0.0;
      while (k < hn && avg[k] < -1e-8 * amax) mass += avg[k++];
      if (mass < best_mass) {
        best_mass = mass;
        lo = t[j];
        hi = t[k - 1];
      }
      j = k;
    } else {
      ++j;
    }
  }
  if (!(hi > lo)) throw Error(ErrorCode::ConstructionFailed, "no negative window in the direction-averaged transform");

  const std::vector<double> fractions{0.1, 0.2, 0.3, 0.4, 0.5};
  const int n_centres = 8;
  std::vector<std::pair<double, double>> lattice;
  const double L = hi - lo;
  for (double fr : fractions) {
    const double w = 0.5 * fr * L;
    for (int k = 0; k < n_centres; ++k) lattice.emplace_back(lo + w + (L - 2.0 * w) * (k + 0.5) / n_centres, w);
  }
  out.lattice_size = lattice.size();

  std::vector<Vec3> sample_dirs;
  if (psi.is_radial()) {
    sample_dirs.push_back(Vec3{0.0, 0.0, 1.0});
  } else {
    const GridPtr g = build_grid(8, 16);
    sample_dirs = g->nodes();
  }
  std::vector<Trial> trials(lattice.size());
  const auto nl = static_cast<long>(lattice.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::threads())
  for (long i = 0; i < nl; ++i) {
    const auto& [c, w] = lattice[static_cast<std::size_t>(i)];
    trials[static_cast<std::size_t>(i)] = run_trial(psi, p, c, w, sample_dirs);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < trials.size(); ++i) {
    if (trials[i].gap > trials[best].gap) best = i;
  }
  const Trial& tr = trials[best];
  if (!tr.ok) {
    throw Error(ErrorCode::ConstructionFailed, "largest norm gap " + std::to_string(tr.gap) + " on " +
                                                   std::to_string(lattice.size()) + " windows in [" +
                                                   std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  out.window_center = tr.c;
  out.window_width = tr.w;
  out.eta = tr.eta;
  out.halvings = tr.halvings;
  out.min_phi = tr.min_phi;
  out.norm_gap = tr.gap;
  out.h = bump_preimage(tr.c, tr.w);
  out.phi = psi + out.h.scaled(-tr.eta);
  out.phi.set_name(psi.name() + " - eta h");
  out.report = verify_comparison_radon(out.phi, psi, p, opt);
  return out;
}

}  // namespace radoncomp
