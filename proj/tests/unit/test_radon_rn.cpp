#include <doctest.h>

#include <cmath>

#include "radoncomp/kernels.hpp"
#include "radoncomp/quadrature.hpp"
#include "radoncomp/radon_rn.hpp"
#include "util.hpp"

using namespace radoncomp;

namespace {

SeparableFunction gaussian() {
  return SeparableFunction::radial(RadialProfile::make([](double s) { return std::exp(-s * s); }, "gauss"));
}

// r^2 e^{-r^2} (1 + P_2(z/r)/2) is smooth at the origin.
SeparableFunction anisotropic_gaussian() {
  auto g = build_grid(16, 32);
  auto ell = SphericalFunction::sample(g, [](const Vec3& u) { return 1.0 + 0.5 * legendre(2, u.z); }, Parity::Even);
  ell.with_spectrum(analyze(ell, 4));
  return SeparableFunction::product(RadialProfile::make([](double s) { return s * s * std::exp(-s * s); }, "r2gauss"),
                                    ell);
}

}  // namespace

TEST_CASE("line grid is cell centred") {
  LineGrid lg{4.0, 8};
  CHECK(lg.dt() == 1.0);
  CHECK(lg.at(0) == -3.5);
  CHECK(lg.at(7) == 3.5);
  auto pos = lg.positive();
  REQUIRE(pos.size() == 4);
  CHECK(pos[0] == 0.5);
}

TEST_CASE("hemisphere direction weights integrate even functions") {
  auto d = DirectionSet::hemisphere(16, 32);
  double s1 = 0.0;
  double sz = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    s1 += d.weights[i];
    sz += d.weights[i] * d.dirs[i].z * d.dirs[i].z;
  }
  CHECK(std::abs(s1 - kFourPi) < 1e-12);
  CHECK(std::abs(sz - kFourPi / 3.0) < 1e-12);
}

TEST_CASE("Gaussian Radon transform, both routes") {
  LineGrid lg;
  auto dirs = DirectionSet::hemisphere(4, 8);
  auto f = gaussian();
  auto a = radon_transform(f, lg, dirs);
  auto b = radon_via_fourier(f, lg, dirs);
  double ea = 0.0;
  double eb = 0.0;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    for (int i = 0; i < lg.N; ++i) {
      const double ref = kPi * std::exp(-lg.at(i) * lg.at(i));
      ea = std::max(ea, std::abs(a.at(d, i) - ref));
      eb = std::max(eb, std::abs(b.at(d, i) - ref));
    }
  }
  CHECK(ea < 1e-10);
  CHECK(eb < 1e-10);
  CHECK(a.evenness_defect() < 1e-14);
  for (double m : a.masses()) CHECK(std::abs(m - std::pow(kPi, 1.5)) < 1e-10);
}

TEST_CASE("non-radial term against the polar reference") {
  auto f = anisotropic_gaussian();
  LineGrid lg{8.0, 512};
  auto dirs = DirectionSet::hemisphere(4, 8);
  auto s = radon_transform(f, lg, dirs);
  for (std::size_t d = 0; d < dirs.size(); d += 3) {
    for (int i : {256, 270, 300, 330}) {
      const double ref = radon_polar(f, lg.at(i), dirs.dirs[d]);
      CHECK(std::abs(s.at(d, i) - ref) < 1e-8);
    }
  }
  // Cavalieri: every direction carries the full mass int f = (3/2) pi^{3/2}
  for (double m : s.masses()) CHECK(std::abs(m - 1.5 * std::pow(kPi, 1.5)) < 1e-8);
}

TEST_CASE("Fourier slice along rays") {
  auto f = gaussian();
  const std::vector<double> r{0.0, 0.5, 1.0, 2.0, 4.0};
  auto v = fourier_along_ray(f, normalized(Vec3{1, 1, 0}), r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(std::abs(v[i] - std::pow(kPi, 1.5) * std::exp(-r[i] * r[i] / 4.0)) < 1e-10);
  }
}

TEST_CASE("cosine transform of a Gaussian") {
  LineGrid lg;
  auto r = lg.positive();
  std::vector<double> m(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) m[j] = std::exp(-r[j] * r[j]);
  auto c = cosine_transform(lg, m);
  REQUIRE(c.size() == r.size());
  for (std::size_t j = 0; j < r.size(); j += 41) {
    CHECK(std::abs(c[j] - std::sqrt(kPi) * std::exp(-r[j] * r[j] / 4.0)) < 1e-12);
  }
}

TEST_CASE("dual Radon of direction-independent data") {
  LineGrid lg;
  auto dirs = DirectionSet::hemisphere(24, 48);
  auto one = Sinogram::from_function([](double, const Vec3&) { return 1.0; }, lg, dirs);
  for (double v : dual_radon_points(one, {{0, 0, 0}, {1, 2, 0.5}})) CHECK(std::abs(v - kFourPi) < 1e-12);

  // int_{S^2} exp(-<x, theta>^2) d theta = 2 pi^{3/2} erf(|x|) / |x|
  auto g = Sinogram::from_function([](double t, const Vec3&) { return std::exp(-t * t); }, lg, dirs);
  const std::vector<Vec3> pts{{0.3, 0, 0}, {0, 1, 1}, {1.5, -0.5, 2}};
  auto v = dual_radon_points(g, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double rr = norm(pts[i]);
    CHECK(std::abs(v[i] - 2.0 * std::pow(kPi, 1.5) * std::erf(rr) / rr) < 1e-7);
  }
}

TEST_CASE("the Gaussian is not an intersection function") {
  auto c = certify_intersection_function(gaussian());
  CHECK(c.overall == Verdict::NotPositiveDefinite);
  CHECK(std::abs(c.witness_t) > 1.0 / std::sqrt(2.0));
  CHECK(c.witness_value < 0.0);
  CHECK(c.failing.size() == c.directions.size());
  // per-direction transform is proportional to (2 - 4 t^2) e^{-t^2}
  const auto t = c.t_grid.positive();
  const std::size_t h = t.size();
  const double k = c.M[0] / ((2.0 - 4.0 * t[0] * t[0]) * std::exp(-t[0] * t[0]));
  for (std::size_t j = 0; j < h; j += 17) {
    const double ref = k * (2.0 - 4.0 * t[j] * t[j]) * std::exp(-t[j] * t[j]);
    CHECK(std::abs(c.M[j] - ref) < 1e-9 * std::abs(k));
  }
  auto sp = certify_intersection_spatial(gaussian());
  CHECK(sp.overall == Verdict::NotPositiveDefinite);
  CHECK(sp.route == "spatial");
}

TEST_CASE("profile errors") {
  RadialProfile slow = RadialProfile::make([](double s) { return 1.0 / (1.0 + s * s); }, "slow", Decay::Algebraic);
  slow.algebraic_order = 2.0;
  auto f = SeparableFunction::radial(slow);
  CHECK_ERROR_CODE(radon_transform(f), ErrorCode::DecayTooSlow);
  CHECK_ERROR_CODE(RadialProfile::make([](double s) { return 1.0 / (1.0 + s); }, "bad"), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(gaussian().power(-1.0), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(anisotropic_gaussian().power(2.0), ErrorCode::InputInvalid);
  auto sq = gaussian().power(2.0);
  CHECK(std::abs(sq(Vec3{0.7, 0, 0}) - std::exp(-2.0 * 0.49)) < 1e-14);
}

TEST_CASE("integrate_rn and the symmetric Gaussian") {
  auto f = gaussian();
  CHECK(std::abs(integrate_rn([&](const Vec3& x) { return f(x); }, 8.0, 32, 4) - std::pow(kPi, 1.5)) < 1e-10);

  auto sg = symmetric_gaussian(1.5, {0.3, -0.2, 0.4});
  const Vec3 th = normalized(Vec3{1, 2, 2});
  for (double t : {0.0, 0.4, 1.1}) {
    CHECK(std::abs(sg.terms()[0].radon(t, th) - radon_polar(sg, t, th)) < 1e-8);
  }
}

TEST_CASE("witness requires a positive certificate") {
  auto c = certify_intersection_function(gaussian());
  CHECK_ERROR_CODE(classification_witness(gaussian(), c, {symmetric_gaussian(1.0, {0, 0, 0})}),
                   ErrorCode::CertificateRequired);
}

TEST_CASE("Radon transform is deterministic across thread counts") {
  auto f = anisotropic_gaussian();
  LineGrid lg{8.0, 256};
  auto dirs = DirectionSet::hemisphere(4, 8);
  kernels::set_threads(1);
  auto a = radon_transform(f, lg, dirs);
  kernels::set_threads(4);
  auto b = radon_transform(f, lg, dirs);
  kernels::set_threads(0);
  CHECK(a.values == b.values);
}
