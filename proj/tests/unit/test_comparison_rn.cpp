#include <doctest.h>

#include <cmath>

#include "radoncomp/catalog.hpp"
#include "radoncomp/comparison_rn.hpp"
#include "util.hpp"

using namespace radoncomp;

namespace {

SeparableFunction gaussian(double a = 1.0, double scale = 1.0) {
  return SeparableFunction::radial(
      RadialProfile::make([a, scale](double s) { return scale * std::exp(-a * s * s); }, "gauss"));
}

}  // namespace

TEST_CASE("Gaussian Lp norms") {
  // int exp(-p a r^2) = (pi / (p a))^{3/2}
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const double ref = std::pow(std::pow(kPi / p, 1.5), 1.0 / p);
    CHECK(std::abs(lp_norm_rn(gaussian(), p) - ref) < 1e-10 * ref);
  }
  CHECK(std::abs(lp_norm_rn(gaussian(), 2.0) - std::pow(kPi / 2.0, 0.75)) < 1e-12);
}

TEST_CASE("Lp norm scaling") {
  const double base = lp_norm_rn(gaussian(), 2.0);
  CHECK(std::abs(lp_norm_rn(gaussian(1.0, 3.0), 2.0) - 3.0 * base) < 1e-12 * base);
  // phi(x / lam) has norm lam^{3/p} ||phi||_p; a = 1/lam^2 with lam = 2
  CHECK(std::abs(lp_norm_rn(gaussian(0.25), 2.0) - std::pow(2.0, 1.5) * base) < 1e-10 * base);
  CHECK(std::abs(power_integral_rn(gaussian(), 2.0) - base * base) < 1e-12);
}

TEST_CASE("heavy tails are rejected") {
  RadialProfile p = RadialProfile::make([](double s) { return 1.0 / std::pow(1.0 + s * s, 2); }, "cauchy2",
                                        Decay::Algebraic);
  p.algebraic_order = 4.0;
  CHECK_ERROR_CODE(lp_norm_rn(SeparableFunction::radial(p), 1.0), ErrorCode::TailTooHeavy);
}

TEST_CASE("sinogram domination and grid mismatch") {
  auto dirs = DirectionSet::hemisphere(2, 4);
  auto a = radon_transform(gaussian(), LineGrid{}, dirs);
  auto b = radon_transform(gaussian(1.0, 2.0), LineGrid{}, dirs);
  CHECK(sinogram_dominates(a, b) >= 0.0);
  CHECK(sinogram_dominates(b, a) < 0.0);
  auto c = radon_transform(gaussian(), LineGrid{16.0, 1024}, dirs);
  CHECK_ERROR_CODE(sinogram_dominates(a, c), ErrorCode::GridMismatch);
  auto d = radon_transform(gaussian(), LineGrid{}, DirectionSet::hemisphere(4, 8));
  CHECK_ERROR_CODE(sinogram_dominates(a, d), ErrorCode::GridMismatch);
}

TEST_CASE("p = 1 compares masses") {
  auto rep = verify_comparison_radon(gaussian(), gaussian(1.0, 2.0), 1.0);
  CHECK(rep.status == ComparisonStatus::Verified);
  CHECK(rep.fubini_residual < 1e-10);
}

TEST_CASE("p below 1 needs a growing power") {
  CHECK_ERROR_CODE(verify_comparison_radon(gaussian(), gaussian(1.0, 2.0), 0.5), ErrorCode::InputInvalid);
}

TEST_CASE("catalog functions have no hyperplane integrals") {
  // f ~ 1/|x| at infinity
  auto e = catalog_entry("gauss-r2", {});
  CHECK_ERROR_CODE(verify_comparison_radon(e.f, e.f.scaled(2.0), 2.0), ErrorCode::DecayTooSlow);
}

TEST_CASE("indicator example fails the hypothesis") {
  RnComparisonOptions opt;
  opt.certify.spatial_fallback = true;
  auto phi = mollified_ball(1.0);
  auto psi = mollified_ball(2.0, 1e-2, 0.25);
  auto rep = verify_comparison_radon(phi, psi, 2.0, opt);
  CHECK(rep.status == ComparisonStatus::HypothesisFails);
  CHECK_FALSE(rep.conclusion_holds);
  CHECK(rep.domination_margin >= -1e-3);
  CHECK(std::abs(std::pow(rep.lp_psi / rep.lp_phi, 2) - 0.5) < 1e-3);
}

TEST_CASE("bump preimage") {
  CHECK(window_bump(0.5, 2.0, 1.0) == 0.0);
  CHECK(std::abs(window_bump(2.0, 2.0, 1.0) - std::exp(-1.0)) < 1e-15);
  auto h = bump_preimage(2.0, 0.5);
  LineGrid lg;
  auto s = radon_transform(h, lg, DirectionSet::hemisphere(2, 4));
  double err = 0.0;
  for (int i = 0; i < lg.N; ++i) err = std::max(err, std::abs(s.at(0, i) - window_bump(std::abs(lg.at(i)), 2.0, 0.5)));
  CHECK(err < 1e-8);
  CHECK_ERROR_CODE(bump_preimage(0.5, 1.0), ErrorCode::InputInvalid);
}

TEST_CASE("counterexample for the Gaussian") {
  auto ce = construct_counterexample_radon(gaussian(), 2.0);
  CHECK(ce.norm_gap > 1e-8);
  CHECK(ce.min_phi >= 0.0);
  CHECK(ce.report.domination_margin >= -ce.report.domination_tol);
  CHECK(ce.eta > 0.0);
  CHECK(ce.report.lp_phi > ce.report.lp_psi);
  CHECK_ERROR_CODE(construct_counterexample_radon(gaussian(), 1.0), ErrorCode::NotApplicable);
}

TEST_CASE("equal inputs and common scaling") {
  RnComparisonOptions opt;
  opt.certify.spatial_fallback = true;
  auto phi = mollified_ball(1.0);
  auto same = verify_comparison_radon(phi, phi, 2.0, opt);
  CHECK(same.domination_margin == 0.0);
  CHECK(same.lp_phi == same.lp_psi);
  auto psi = mollified_ball(2.0, 1e-2, 0.25);
  auto a = verify_comparison_radon(phi, psi, 2.0, opt);
  auto b = verify_comparison_radon(phi.scaled(3.0), psi.scaled(3.0), 2.0, opt);
  CHECK(a.status == b.status);
  CHECK(a.certificate.overall == b.certificate.overall);
  CHECK(std::abs(b.lp_psi / b.lp_phi - a.lp_psi / a.lp_phi) < 1e-12);
}

TEST_CASE("margin against a bumped sinogram") {
  LineGrid lg;
  auto dirs = DirectionSet::hemisphere(2, 4);
  auto b = radon_transform(gaussian(), lg, dirs);
  auto a = b;
  double bump_max = 0.0;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    for (int i = 0; i < lg.N; ++i) {
      const double v = window_bump(std::abs(lg.at(i)), 1.0, 0.5);
      a.values[d * lg.N + i] += v;
      bump_max = std::max(bump_max, v);
    }
  }
  CHECK(std::abs(sinogram_dominates(a, b) + bump_max) < 1e-15);
}
