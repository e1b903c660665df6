#include "radoncomp/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radoncomp/quadrature.hpp"

namespace radoncomp {

double multiplier(int n, int k, double p) {
  if (k < 0 || k % 2 != 0) throw Error(ErrorCode::OutOfRange, "multiplier needs an even degree, got " + std::to_string(k));
  if (!(p > 0.0 && p < n)) throw Error(ErrorCode::OutOfRange, "multiplier needs 0 < p < n");
  const double lg = std::lgamma(0.5 * (k + n - p)) - std::lgamma(0.5 * (k + p));
  const double mag = std::pow(kPi, 0.5 * n) * std::exp2(n - p) * std::exp(lg);
  return (k / 2) % 2 == 0 ? mag : -mag;
}

double funk_hecke(int n, int k) {
  if (k % 2 != 0) return 0.0;
  return multiplier(n, k, n - 1.0) / kPi;
}

MultiplierTable::MultiplierTable(int n, int l_max) : n_(n), l_max_(l_max), funk_(static_cast<std::size_t>(l_max + 1)) {
  if (n < 2) throw Error(ErrorCode::OutOfRange, "dimension must be at least 2");
  for (int k = 0; k <= l_max; ++k) funk_[static_cast<std::size_t>(k)] = funk_hecke(n, k);
}

const std::vector<double>& MultiplierTable::lambda(double p) const {
  auto it = cache_.find(p);
  if (it != cache_.end()) return it->second;
  std::vector<double> v(static_cast<std::size_t>(l_max_ + 1), 0.0);
  for (int k = 0; k <= l_max_; k += 2) v[static_cast<std::size_t>(k)] = multiplier(n_, k, p);
  return cache_.emplace(p, std::move(v)).first->second;
}

HarmonicSpectrum fourier_homogeneous(const HarmonicSpectrum& f, double p) {
  if (!f.is_even(1e-10)) throw Error(ErrorCode::NotEven, "homogeneous transform needs an even spectrum");
  const MultiplierTable table(kDim, f.l_max());
  return f.even_part().scaled_by_degree(table.lambda(p));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::PositiveDefinite: return "positive-definite";
    case Verdict::NotPositiveDefinite: return "not-positive-definite";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict classify(double min_value, double max_abs, double rel_tol) {
  const double tol = rel_tol * max_abs;
  if (min_value < -tol) return Verdict::NotPositiveDefinite;
  if (min_value <= tol) return Verdict::Inconclusive;
  return Verdict::PositiveDefinite;
}

namespace {

int degree_of(const SphericalFunction& f) {
  if (f.spectrum()) return f.spectrum()->l_max();
  return (f.grid()->bandwidth() + 1) / 2;
}

}  // namespace

PowerTransform power_transform(const SphericalFunction& f, double q, int l_max) {
  const int bw = f.grid()->bandwidth();
  if (l_max < 0) l_max = std::min(2 * degree_of(f), bw);
  PowerTransform out;
  const SphericalFunction fq = f.map([q](double v) { return std::pow(v, q); });
  out.power = analyze(fq, l_max).even_part();
  const SphericalFunction back = synthesize(out.power, f.grid());
  double err = 0.0;
  for (std::size_t n = 0; n < back.values().size(); ++n) err = std::max(err, std::abs(back.values()[n] - fq.values()[n]));
  out.truncation_residual = err / std::max(fq.max_abs(), 1e-300);
  out.transform = fourier_homogeneous(out.power, 1.0);
  out.h = synthesize(out.transform, f.grid());
  return out;
}

PDCertificate certify_pd_r1(const SphericalFunction& f, double q, int l_max) {
  if (!(f.min() > 0.0)) throw Error(ErrorCode::NotPositive, "certify_pd_r1 needs a strictly positive function");
  PowerTransform pt = power_transform(f, q, l_max);
  PDCertificate cert;
  const SphericalFunction& h = pt.h;
  cert.max_abs = h.max_abs();
  cert.tolerance = 1e-9 * cert.max_abs;
  const std::size_t i = h.argmin();
  cert.witness_point = h.grid()->nodes()[i];
  cert.witness_value = h.values()[i];
  cert.verdict = classify(cert.witness_value, cert.max_abs);
  cert.truncation_residual = pt.truncation_residual;
  cert.transform = std::move(pt.h);
  return cert;
}

ParsevalResult spherical_parseval_check(const SphericalFunction& f, const SphericalFunction& g, double p, int l_max) {
  const GridPtr& grid = f.grid();
  if (l_max < 0) l_max = grid->bandwidth();
  ParsevalResult res;
  auto even_values = [&](const SphericalFunction& s) {
    std::vector<double> v(s.values().size());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = 0.5 * (s.values()[n] + s.values()[grid->antipode(n)]);
    return SphericalFunction(grid, std::move(v), Parity::Even);
  };
  SphericalFunction fe = f;
  SphericalFunction ge = g;
  const HarmonicSpectrum fs = analyze(f, l_max);
  const HarmonicSpectrum gs = analyze(g, l_max);
  if (!fs.is_even(1e-10) || !gs.is_even(1e-10)) {
    res.odd_part_dropped = true;
    fe = even_values(f);
    ge = even_values(g);
  }
  const auto a = synthesize(fourier_homogeneous(fs.even_part(), p), grid);
  const auto b = synthesize(fourier_homogeneous(gs.even_part(), kDim - p), grid);
  res.lhs = inner(a, b);
  res.rhs = std::pow(kTwoPi, kDim) * inner(fe, ge);
  res.residual = std::abs(res.lhs - res.rhs) / std::max({std::abs(res.lhs), std::abs(res.rhs), 1e-300});
  return res;
}

}  // namespace radoncomp
