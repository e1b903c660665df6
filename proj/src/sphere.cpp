#include "radoncomp/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radoncomp/quadrature.hpp"

namespace radoncomp {

SphereGrid::SphereGrid(int n_polar, int n_azimuth) : n_polar_(n_polar), n_azimuth_(n_azimuth) {
  if (n_polar < 2 || n_azimuth < 4 || n_azimuth % 2 != 0) {
    throw Error(ErrorCode::InvalidGrid, "grid (" + std::to_string(n_polar) + ", " + std::to_string(n_azimuth) +
                                            ") needs n_polar >= 2 and even n_azimuth >= 4");
  }
  const GaussLegendre gl = gauss_legendre(n_polar);
  ring_z_ = gl.nodes;
  ring_w_ = gl.weights;

  // cos/sin on the first half, negated on the second so antipodes are exact
  const int half = n_azimuth / 2;
  std::vector<double> c(static_cast<std::size_t>(n_azimuth));
  std::vector<double> s(static_cast<std::size_t>(n_azimuth));
  phi_.resize(static_cast<std::size_t>(n_azimuth));
  for (int j = 0; j < n_azimuth; ++j) phi_[static_cast<std::size_t>(j)] = kTwoPi * j / n_azimuth;
  for (int j = 0; j < half; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    c[uj] = std::cos(phi_[uj]);
    s[uj] = std::sin(phi_[uj]);
    c[uj + static_cast<std::size_t>(half)] = -c[uj];
    s[uj + static_cast<std::size_t>(half)] = -s[uj];
  }

  const double dphi = kTwoPi / n_azimuth;
  nodes_.reserve(static_cast<std::size_t>(n_polar) * static_cast<std::size_t>(n_azimuth));
  weights_.reserve(nodes_.capacity());
  for (int i = 0; i < n_polar; ++i) {
    const double z = ring_z_[static_cast<std::size_t>(i)];
    const double st = std::sqrt((1.0 - z) * (1.0 + z));
    for (int j = 0; j < n_azimuth; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      nodes_.push_back({st * c[uj], st * s[uj], z});
      weights_.push_back(ring_w_[static_cast<std::size_t>(i)] * dphi);
    }
  }
}

int SphereGrid::bandwidth() const { return std::min(n_polar_ - 1, (n_azimuth_ - 1) / 2); }

std::size_t SphereGrid::antipode(std::size_t node) const {
  const auto na = static_cast<std::size_t>(n_azimuth_);
  const std::size_t i = node / na;
  const std::size_t j = node % na;
  return index(n_polar_ - 1 - static_cast<int>(i), static_cast<int>((j + na / 2) % na));
}

std::vector<std::size_t> SphereGrid::hemisphere() const {
  std::vector<std::size_t> out;
  out.reserve(size() / 2 + 1);
  for (std::size_t n = 0; n < size(); ++n) {
    if (n < antipode(n)) out.push_back(n);
  }
  return out;
}

GridPtr build_grid(int n_polar, int n_azimuth) { return std::make_shared<const SphereGrid>(n_polar, n_azimuth); }

// ---------------------------------------------------------------------------

HarmonicSpectrum::HarmonicSpectrum(int l_max) : l_max_(l_max), coeffs_(count(l_max), 0.0) {
  if (l_max < 0) throw Error(ErrorCode::OutOfRange, "negative l_max");
}

double HarmonicSpectrum::max_abs() const {
  double m = 0.0;
  for (double a : coeffs_) m = std::max(m, std::abs(a));
  return m;
}

double HarmonicSpectrum::odd_magnitude() const {
  double m = 0.0;
  for (int k = 1; k <= l_max_; k += 2) {
    for (int j = -k; j <= k; ++j) m = std::max(m, std::abs((*this)(k, j)));
  }
  return m;
}

bool HarmonicSpectrum::is_even(double rel_tol) const { return odd_magnitude() <= rel_tol * max_abs(); }

HarmonicSpectrum HarmonicSpectrum::even_part() const {
  HarmonicSpectrum out = *this;
  for (int k = 1; k <= l_max_; k += 2) {
    for (int j = -k; j <= k; ++j) out(k, j) = 0.0;
  }
  return out;
}

HarmonicSpectrum HarmonicSpectrum::resized(int l_max) const {
  HarmonicSpectrum out(l_max);
  const int top = std::min(l_max, l_max_);
  for (int k = 0; k <= top; ++k) {
    for (int j = -k; j <= k; ++j) out(k, j) = (*this)(k, j);
  }
  return out;
}

HarmonicSpectrum& HarmonicSpectrum::operator+=(const HarmonicSpectrum& o) {
  if (o.l_max_ > l_max_) *this = resized(o.l_max_);
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

HarmonicSpectrum& HarmonicSpectrum::operator*=(double s) {
  for (double& a : coeffs_) a *= s;
  return *this;
}

HarmonicSpectrum HarmonicSpectrum::scaled_by_degree(std::span<const double> factors) const {
  HarmonicSpectrum out = *this;
  for (int k = 0; k <= l_max_; ++k) {
    for (int j = -k; j <= k; ++j) out(k, j) *= factors[static_cast<std::size_t>(k)];
  }
  return out;
}

HarmonicSpectrum operator+(HarmonicSpectrum a, const HarmonicSpectrum& b) { return a += b; }
HarmonicSpectrum operator-(HarmonicSpectrum a, const HarmonicSpectrum& b) {
  HarmonicSpectrum nb = b;
  nb *= -1.0;
  return a += nb;
}
HarmonicSpectrum operator*(double s, HarmonicSpectrum a) { return a *= s; }

// ---------------------------------------------------------------------------

SphericalFunction::SphericalFunction(GridPtr grid, std::vector<double> values, Parity parity)
    : grid_(std::move(grid)), values_(std::move(values)), parity_(parity) {
  if (values_.size() != grid_->size()) throw Error(ErrorCode::GridMismatch, "sample count differs from grid size");
  if (parity_ == Parity::Even) {
    const double tol = 1e-10 * std::max(max_abs(), 1e-300);
    for (std::size_t n = 0; n < values_.size(); ++n) {
      if (std::abs(values_[n] - values_[grid_->antipode(n)]) > tol) {
        throw Error(ErrorCode::NotEven, "antipodal samples differ at node " + std::to_string(n));
      }
    }
  }
}

SphericalFunction SphericalFunction::sample(GridPtr grid, const std::function<double(const Vec3&)>& f,
                                            Parity parity) {
  std::vector<double> v(grid->size());
  const auto& nodes = grid->nodes();
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = f(nodes[n]);
  return SphericalFunction(std::move(grid), std::move(v), parity);
}

SphericalFunction SphericalFunction::constant(GridPtr grid, double c) {
  std::vector<double> v(grid->size(), c);
  return SphericalFunction(std::move(grid), std::move(v), Parity::Even);
}

double SphericalFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double SphericalFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }
double SphericalFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}
std::size_t SphericalFunction::argmin() const {
  return static_cast<std::size_t>(std::min_element(values_.begin(), values_.end()) - values_.begin());
}
std::size_t SphericalFunction::argmax() const {
  return static_cast<std::size_t>(std::max_element(values_.begin(), values_.end()) - values_.begin());
}

double SphericalFunction::operator()(const Vec3& u) const {
  if (!spectrum_) throw Error(ErrorCode::InputInvalid, "off-grid evaluation needs a spectrum");
  return evaluate(*spectrum_, u);
}

SphericalFunction SphericalFunction::map(const std::function<double(double)>& fn) const {
  std::vector<double> v(values_.size());
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = fn(values_[n]);
  SphericalFunction out;
  out.grid_ = grid_;
  out.values_ = std::move(v);
  out.parity_ = parity_ == Parity::Even ? Parity::Even : Parity::None;
  return out;
}

// ---------------------------------------------------------------------------

TransformPlan::TransformPlan(const SphereGrid& grid, int l_max) {
  const int np = grid.n_polar();
  const int na = grid.n_azimuth();
  const std::size_t tri = tri_size(l_max);
  legendre_.resize(static_cast<std::size_t>(np) * tri);
  for (int i = 0; i < np; ++i) {
    normalized_legendre(l_max, grid.ring_z()[static_cast<std::size_t>(i)],
                        legendre_.data() + static_cast<std::size_t>(i) * tri);
  }
  // cos(m phi_j) looked up by (m j) mod n on a table that is exactly odd under a half turn
  const int half = na / 2;
  std::vector<double> bc(static_cast<std::size_t>(na));
  std::vector<double> bs(static_cast<std::size_t>(na));
  for (int j = 0; j < half; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    bc[uj] = std::cos(kTwoPi * j / na);
    bs[uj] = std::sin(kTwoPi * j / na);
    bc[uj + static_cast<std::size_t>(half)] = -bc[uj];
    bs[uj + static_cast<std::size_t>(half)] = -bs[uj];
  }
  cos_.resize(static_cast<std::size_t>(l_max + 1) * static_cast<std::size_t>(na));
  sin_.resize(cos_.size());
  for (int m = 0; m <= l_max; ++m) {
    for (int j = 0; j < na; ++j) {
      const auto idx = static_cast<std::size_t>((static_cast<long>(m) * j) % na);
      const std::size_t o = static_cast<std::size_t>(m) * static_cast<std::size_t>(na) + static_cast<std::size_t>(j);
      cos_[o] = bc[idx];
      sin_[o] = bs[idx];
    }
  }
  ring_w_.resize(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) ring_w_[static_cast<std::size_t>(i)] = grid.ring_weights()[static_cast<std::size_t>(i)] * kTwoPi / na;

  tab_.n_polar = np;
  tab_.n_azimuth = na;
  tab_.l_max = l_max;
  tab_.legendre = legendre_.data();
  tab_.cos_m = cos_.data();
  tab_.sin_m = sin_.data();
  tab_.ring_weight = ring_w_.data();
}

HarmonicSpectrum analyze(const SphericalFunction& f, int l_max) {
  const SphereGrid& grid = *f.grid();
  const int bw = grid.bandwidth();
  if (l_max < 0) l_max = (bw + 1) / 2;
  if (l_max > bw) {
    throw Error(ErrorCode::BandwidthExceeded,
                "l_max " + std::to_string(l_max) + " exceeds grid bandwidth " + std::to_string(bw));
  }
  const TransformPlan plan(grid, l_max);
  HarmonicSpectrum s(l_max);
  kernels::omp::analyze(plan.tables(), f.values().data(), s.coeffs().data());
  return s;
}

SphericalFunction synthesize(const HarmonicSpectrum& s, const GridPtr& grid) {
  const TransformPlan plan(*grid, s.l_max());
  std::vector<double> v(grid->size());
  kernels::omp::synthesize(plan.tables(), s.coeffs().data(), v.data());
  const Parity parity = s.odd_magnitude() == 0.0 ? Parity::Even : Parity::None;
  SphericalFunction out(grid, std::move(v), parity);
  out.with_spectrum(s);
  return out;
}

std::vector<double> basis_values(int l_max, const Vec3& u) {
  const double r = norm(u);
  const double z = std::clamp(u.z / r, -1.0, 1.0);
  const double phi = std::atan2(u.y, u.x);
  std::vector<double> P(tri_size(l_max));
  normalized_legendre(l_max, z, P.data());
  std::vector<double> out(HarmonicSpectrum::count(l_max));
  const double sq2 = std::sqrt(2.0);
  for (int k = 0; k <= l_max; ++k) {
    out[HarmonicSpectrum::index(k, 0)] = P[tri_index(k, 0)];
    for (int m = 1; m <= k; ++m) {
      const double p = sq2 * P[tri_index(k, m)];
      out[HarmonicSpectrum::index(k, m)] = p * std::cos(m * phi);
      out[HarmonicSpectrum::index(k, -m)] = p * std::sin(m * phi);
    }
  }
  return out;
}

std::vector<double> evaluate_by_degree(const HarmonicSpectrum& s, const Vec3& u) {
  const std::vector<double> Y = basis_values(s.l_max(), u);
  std::vector<double> out(static_cast<std::size_t>(s.l_max() + 1), 0.0);
  for (int k = 0; k <= s.l_max(); ++k) {
    double acc = 0.0;
    for (int m = -k; m <= k; ++m) acc += s(k, m) * Y[HarmonicSpectrum::index(k, m)];
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

double evaluate(const HarmonicSpectrum& s, const Vec3& u) {
  double acc = 0.0;
  for (double v : evaluate_by_degree(s, u)) acc += v;
  return acc;
}

SphericalFunction band_limited(const SphericalFunction& f, int l_max) {
  return synthesize(analyze(f, l_max), f.grid());
}

double integrate(const SphericalFunction& f) {
  const auto& w = f.grid()->weights();
  double acc = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) acc += w[n] * f.values()[n];
  return acc;
}

double inner(const SphericalFunction& f, const SphericalFunction& g) {
  if (f.grid() != g.grid() && (f.grid()->n_polar() != g.grid()->n_polar() ||
                               f.grid()->n_azimuth() != g.grid()->n_azimuth())) {
    throw Error(ErrorCode::GridMismatch, "inner product on different grids");
  }
  const auto& w = f.grid()->weights();
  double acc = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) acc += w[n] * f.values()[n] * g.values()[n];
  return acc;
}

double lp_norm_sphere(const SphericalFunction& f, double p) {
  if (!(p > 0.0)) throw Error(ErrorCode::OutOfRange, "p must be positive");
  const auto& w = f.grid()->weights();
  double acc = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) acc += w[n] * std::pow(std::abs(f.values()[n]), p);
  return std::pow(acc, 1.0 / p);
}

ReverseHolderResult reverse_holder_check(const SphericalFunction& h, const SphericalFunction& w, double r,
                                         double tol) {
  if (!(r > 1.0)) throw Error(ErrorCode::OutOfRange, "reverse Hoelder needs r > 1");
  const double ih = integrate(h);
  const double iw = integrate(w);
  if (ih == 0.0 || iw == 0.0) throw Error(ErrorCode::DegenerateInput, "operand with zero integral");
  const auto& wt = h.grid()->weights();
  double hw = 0.0;
  double hr = 0.0;
  double wr = 0.0;
  bool w_vanishes = false;
  for (std::size_t n = 0; n < wt.size(); ++n) {
    const double a = h.values()[n];
    const double b = w.values()[n];
    hw += wt[n] * a * b;
    hr += wt[n] * std::pow(a, 1.0 / r);
    if (b <= 0.0) {
      w_vanishes = true;
    } else {
      wr += wt[n] * std::pow(b, -1.0 / (r - 1.0));
    }
  }
  ReverseHolderResult res;
  res.lhs = hw;
  // ||h||_{1/r} ||w||_{-1/(r-1)}; a vanishing w sends the second factor to 0
  res.rhs = w_vanishes ? 0.0 : std::pow(hr, r) * std::pow(wr, -(r - 1.0));
  res.margin = res.lhs - res.rhs;
  res.holds = res.margin >= -tol * std::max({std::abs(res.lhs), std::abs(res.rhs), 1.0});
  return res;
}

}  // namespace radoncomp
