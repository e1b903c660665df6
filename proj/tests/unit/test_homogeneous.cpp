#include <doctest.h>

#include <cmath>
#include <random>

#include "radoncomp/homogeneous.hpp"
#include "radoncomp/quadrature.hpp"
#include "util.hpp"

using namespace radoncomp;

namespace {

// Direct Gamma-function form, independent of the library's log-gamma route.
double lambda_tgamma(int k, double p) {
  const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::pow(kPi, 1.5) * std::pow(2.0, 3.0 - p) * std::tgamma((k + 3.0 - p) / 2.0) /
         std::tgamma((k + p) / 2.0);
}

}  // namespace

TEST_CASE("multiplier matches the Gamma formula") {
  for (int k = 0; k <= 40; k += 2) {
    for (double p : {0.25, 0.5, 1.0, 1.5, 2.0, 2.75}) {
      const double ref = lambda_tgamma(k, p);
      CHECK(std::abs(multiplier(3, k, p) - ref) <= 1e-12 * std::abs(ref));
    }
  }
  // the Fourier transform of |x|^{-2} in R^3 is 2 pi^2 |xi|^{-1}
  CHECK(std::abs(multiplier(3, 0, 2.0) - 2.0 * kPi * kPi) < 1e-12);
  CHECK(std::abs(multiplier(3, 0, 1.0) - 4.0 * kPi) < 1e-12);
}

TEST_CASE("multiplier domain") {
  CHECK_ERROR_CODE(multiplier(3, 1, 1.0), ErrorCode::OutOfRange);
  CHECK_ERROR_CODE(multiplier(3, 2, 0.0), ErrorCode::OutOfRange);
  CHECK_ERROR_CODE(multiplier(3, 2, 3.0), ErrorCode::OutOfRange);
}

TEST_CASE("duality and the section identity") {
  const double c = std::pow(2.0 * kPi, 3);
  for (int k = 0; k <= 64; k += 2) {
    for (double p : {0.5, 1.0, 1.5, 2.0, 2.5}) {
      CHECK(std::abs(multiplier(3, k, p) * multiplier(3, k, 3.0 - p) - c) <= 1e-10 * c);
    }
    const double fh = 2.0 * kPi * legendre(k, 0.0);
    CHECK(std::abs(funk_hecke(3, k) - fh) <= 1e-12 * std::max(1.0, std::abs(fh)));
  }
  CHECK(funk_hecke(3, 3) == 0.0);
}

TEST_CASE("multiplier table caches per p") {
  MultiplierTable t(3, 10);
  const auto& a = t.lambda(1.5);
  CHECK(a.size() == 11);
  CHECK(a[1] == 0.0);
  CHECK(std::abs(a[4] - multiplier(3, 4, 1.5)) < 1e-14 * std::abs(a[4]));
  CHECK(&t.lambda(1.5) == &a);
}

TEST_CASE("classify") {
  CHECK(classify(0.5, 1.0) == Verdict::PositiveDefinite);
  CHECK(classify(-0.5, 1.0) == Verdict::NotPositiveDefinite);
  CHECK(classify(-1e-12, 1.0) == Verdict::Inconclusive);
  CHECK(classify(1e-12, 1.0) == Verdict::Inconclusive);
}

TEST_CASE("constant function: transform 4 pi and positive") {
  auto g = build_grid(16, 32);
  auto one = SphericalFunction::constant(g, 1.0);
  auto c = certify_pd_r1(one, 1.0);
  CHECK(c.verdict == Verdict::PositiveDefinite);
  REQUIRE(c.transform.has_value());
  CHECK(std::abs(c.transform->min() - 4.0 * kPi) < 1e-10);
  CHECK(std::abs(c.transform->max() - 4.0 * kPi) < 1e-10);
  CHECK_ERROR_CODE(certify_pd_r1(SphericalFunction::constant(g, -1.0), 1.0), ErrorCode::NotPositive);
}

TEST_CASE("strong quadrupole is not positive definite") {
  auto g = build_grid(32, 64);
  // P_2 has lambda(3, 2, 1) < 0, so a large P_2 weight flips the sign
  auto f = SphericalFunction::sample(g, [](const Vec3& u) { return 1.0 + 0.9 * legendre(2, u.z); }, Parity::Even);
  auto c = certify_pd_r1(f, 1.0);
  CHECK(c.verdict == Verdict::NotPositiveDefinite);
  CHECK(c.witness_value < 0.0);
  auto mild = SphericalFunction::sample(g, [](const Vec3& u) { return 1.0 + 0.2 * legendre(2, u.z); }, Parity::Even);
  CHECK(certify_pd_r1(mild, 1.0).verdict == Verdict::PositiveDefinite);
}

TEST_CASE("fourier_homogeneous scales each degree") {
  HarmonicSpectrum s(6);
  s(0, 0) = 1.0;
  s(2, 1) = 0.5;
  s(6, -3) = 0.25;
  auto t = fourier_homogeneous(s, 1.5);
  CHECK(std::abs(t(0, 0) - multiplier(3, 0, 1.5)) < 1e-12 * std::abs(t(0, 0)));
  CHECK(std::abs(t(2, 1) - 0.5 * multiplier(3, 2, 1.5)) < 1e-12 * std::abs(t(2, 1)));
  CHECK(std::abs(t(6, -3) - 0.25 * multiplier(3, 6, 1.5)) < 1e-12 * std::abs(t(6, -3)));
  s(3, 0) = 1.0;
  CHECK_ERROR_CODE(fourier_homogeneous(s, 1.5), ErrorCode::NotEven);
}

TEST_CASE("spherical Parseval identity") {
  auto g = build_grid(24, 48);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-0.2, 0.2);
  for (int trial = 0; trial < 4; ++trial) {
    HarmonicSpectrum a(8);
    HarmonicSpectrum b(8);
    for (int k = 0; k <= 8; k += 2) {
      for (int m = -k; m <= k; ++m) {
        a(k, m) = d(rng);
        b(k, m) = d(rng);
      }
    }
    a(0, 0) = b(0, 0) = 2.0;
    auto f = synthesize(a, g);
    auto h = synthesize(b, g);
    for (double p : {0.5, 1.0, 2.0}) {
      auto r = spherical_parseval_check(f, h, p);
      CHECK(r.residual < 1e-10);
    }
  }
}
