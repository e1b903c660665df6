#include <doctest.h>

#include <cmath>

#include "radoncomp/catalog.hpp"
#include "radoncomp/comparison_rn.hpp"
#include "util.hpp"

using namespace radoncomp;

TEST_CASE("gamma_q closed cases") {
  for (double t : {0.0, 0.5, 1.0, 3.0}) {
    CHECK(std::abs(gamma_q(2.0, t) - std::sqrt(kPi) * std::exp(-t * t / 4.0)) < 1e-11);
    CHECK(std::abs(gamma_q(1.0, t) - 2.0 / (1.0 + t * t)) < 1e-11);
  }
  // q > 2 changes sign
  double lo = 0.0;
  for (double t = 0.0; t < 10.0; t += 0.05) lo = std::min(lo, gamma_q(4.0, t));
  CHECK(lo < -1e-3);
}

TEST_CASE("catalog verdicts match the expected class") {
  for (const auto& name : catalog_names()) {
    const std::vector<double> args = name == "gamma-q" ? std::vector<double>{1.5} : std::vector<double>{};
    auto e = catalog_entry(name, args);
    CHECK(e.intersection);
    auto c = certify_intersection_function(e.f);
    CHECK_MESSAGE(c.overall == Verdict::PositiveDefinite, name);
  }
  auto q4 = catalog_entry("gamma-q", {4.0});
  CHECK_FALSE(q4.intersection);
  CHECK(certify_intersection_function(q4.f).overall == Verdict::NotPositiveDefinite);
}

TEST_CASE("numerical m and M agree with the closed forms") {
  for (const auto& name : {"gauss-r2", "erf-type"}) {
    auto e = catalog_entry(name, {});
    auto c = certify_intersection_function(e.f);
    const auto r = c.t_grid.positive();
    const std::size_t h = r.size();
    double em = 0.0;
    double eM = 0.0;
    double mm = 0.0;
    double mM = 0.0;
    for (std::size_t d = 0; d < c.directions.size(); ++d) {
      const Vec3 th = c.directions.dirs[d];
      for (std::size_t j = 0; j < h; ++j) {
        em = std::max(em, std::abs(c.m[d * h + j] - e.m(r[j], th)));
        eM = std::max(eM, std::abs(c.M[d * h + j] - e.M(r[j], th)));
        mm = std::max(mm, std::abs(e.m(r[j], th)));
        mM = std::max(mM, std::abs(e.M(r[j], th)));
      }
    }
    CHECK_MESSAGE(em < 1e-10 * mm, name);
    CHECK_MESSAGE(eM < 1e-10 * mM, name);
  }
}

TEST_CASE("f is the dual Radon transform of the data") {
  LineGrid lg;
  auto dirs = DirectionSet::hemisphere(32, 64);
  for (const auto& name : {"gauss-r2", "exp-ell"}) {
    auto e = catalog_entry(name, {});
    auto s = e.sinogram(lg, dirs);
    const std::vector<Vec3> pts{{0.5, 0, 0}, {0, 1, 1}, {2, 1, -1}};
    auto v = dual_radon_points(s, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(v[i] - e.f(pts[i])) < 1e-6 * std::abs(e.f(pts[i])));
  }
  // gauss-r2 closed form 2 pi erf(rho/2) / rho
  auto e = catalog_entry("gauss-r2", {1.0});
  CHECK(std::abs(e.f(Vec3{0, 0, 1.3}) - kTwoPi * std::erf(0.65) / 1.3) < 1e-14);
}

TEST_CASE("direction-dependent ell") {
  auto ell = [](const Vec3& u) { return 1.0 + 0.5 * u.z * u.z; };
  auto e = catalog_entry("gauss-r2", {}, ell);
  CHECK_FALSE(e.f.is_radial());
  const Vec3 th{0, 0, 1};
  CHECK(std::abs(e.m(1.0, th) - 8.0 * kPi * kPi * std::exp(-1.5)) < 1e-12);
  auto bad = catalog_entry("exp-ell", {}, [](const Vec3&) { return -1.0; });
  CHECK_ERROR_CODE(bad.m(1.0, th), ErrorCode::InputInvalid);
}

TEST_CASE("catalog errors") {
  CHECK_ERROR_CODE(catalog_entry("nope", {}), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(catalog_entry("gamma-q", {}), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(catalog_entry("gamma-q", {-1.0}), ErrorCode::InputInvalid);
  CHECK_ERROR_CODE(catalog_entry("erf-type", {1.0, 0.0}), ErrorCode::InputInvalid);
}

TEST_CASE("an intersection function admits no counterexample") {
  auto e = catalog_entry("gauss-r2", {});
  CHECK_ERROR_CODE(construct_counterexample_radon(e.f, 2.0), ErrorCode::NotApplicable);
}

TEST_CASE("mollified ball") {
  CHECK(std::abs(mollified_ball_profile(0.0, 1.0, 1e-2) - 1.0) < 1e-12);
  CHECK(std::abs(mollified_ball_profile(1.0, 1.0, 1e-2) - 0.5) < 1e-2);
  CHECK(mollified_ball_profile(1.2, 1.0, 1e-2) < 1e-12);
  CHECK(std::abs(mollified_ball_profile(2.0, 2.0, 1e-2) - mollified_ball_profile(1.0, 1.0, 1e-2)) < 1e-15);
  auto b = mollified_ball(1.0);
  LineGrid lg;
  auto dirs = DirectionSet::hemisphere(2, 4);
  auto s = radon_transform(b, lg, dirs);
  // pi (1 - t^2) away from the rim
  for (int i = lg.half(); i < lg.N; ++i) {
    const double t = lg.at(i);
    if (t > 0.9) break;
    CHECK(std::abs(s.at(0, i) - kPi * (1.0 - t * t)) < 1e-3);
  }
  // convolution keeps the mass of the ball
  CHECK(std::abs(lp_norm_rn(b, 1.0) - 4.0 * kPi / 3.0) < 1e-8);
  CHECK_ERROR_CODE(mollified_ball(-1.0), ErrorCode::InputInvalid);
}
