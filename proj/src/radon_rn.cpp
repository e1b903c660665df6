#include "radoncomp/radon_rn.hpp"

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "radoncomp/kernels.hpp"
#include "radoncomp/quadrature.hpp"

namespace radoncomp {

namespace {

constexpr int kPanelOrder = 16;

// Composite Gauss-Legendre nodes on [0, R], refined around breakpoints.
GaussLegendre radial_rule(double R, const std::vector<double>& breakpoints, int panels) {
  std::vector<double> cuts{0.0};
  const double halo = 0.25;
  for (double b : breakpoints) {
    if (b - halo > cuts.back() && b + halo < R) {
      cuts.push_back(b - halo);
      cuts.push_back(b + halo);
    }
  }
  cuts.push_back(R);
  GaussLegendre out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const bool fine = (i % 2 == 1) && cuts.size() > 2;
    const int n = fine ? 96 : std::max(4, static_cast<int>(std::ceil(panels * (b - a) / R)));
    const GaussLegendre part = composite_gauss_legendre(a, b, n, kPanelOrder);
    out.nodes.insert(out.nodes.end(), part.nodes.begin(), part.nodes.end());
    out.weights.insert(out.weights.end(), part.weights.begin(), part.weights.end());
  }
  return out;
}

// Adaptive integral over [a, b] split at the breakpoints inside it.
double integrate_split(const std::function<double(double)>& f, double a, double b, const std::vector<double>& bps) {
  double acc = 0.0;
  double lo = a;
  for (double p : bps) {
    if (p > lo && p < b) {
      acc += integrate_adaptive(f, lo, p, 1e-13, 20);
      lo = p;
    }
  }
  return acc + integrate_adaptive(f, lo, b, 1e-13, 20);
}

std::vector<int> even_degrees(const SeparableTerm& term) {
  std::vector<int> ks;
  const int L = term.angular ? term.angular->spectrum()->l_max() : 0;
  for (int k = 0; k <= L; k += 2) ks.push_back(k);
  return ks;
}

// l_k(theta) for each direction and even degree.
std::vector<double> degree_factors(const SeparableTerm& term, const std::vector<int>& ks, const DirectionSet& dirs) {
  std::vector<double> out(dirs.size() * ks.size(), 1.0);
  if (!term.angular) return out;
  const HarmonicSpectrum& s = *term.angular->spectrum();
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    const std::vector<double> byk = evaluate_by_degree(s, dirs.dirs[d]);
    for (std::size_t i = 0; i < ks.size(); ++i) out[d * ks.size() + i] = byk[static_cast<std::size_t>(ks[i])];
  }
  return out;
}

void check_algebraic_radon(const SeparableTerm& term) {
  if (term.decay == Decay::Algebraic && !(term.profile && term.profile->algebraic_order > 2.0)) {
    throw Error(ErrorCode::DecayTooSlow, "hyperplane integrals of an algebraically decaying term diverge");
  }
}

struct Tables {
  std::vector<double> angular;  // n_dir x K
  std::vector<double> radial;   // K x n
  std::size_t K = 0;
};

void append_tables(Tables& T, std::size_t n_dir, std::size_t n, const std::vector<double>& ang, std::size_t k_new,
                   const std::vector<double>& rad) {
  std::vector<double> merged(n_dir * (T.K + k_new));
  for (std::size_t d = 0; d < n_dir; ++d) {
    for (std::size_t k = 0; k < T.K; ++k) merged[d * (T.K + k_new) + k] = T.angular[d * T.K + k];
    for (std::size_t k = 0; k < k_new; ++k) merged[d * (T.K + k_new) + T.K + k] = ang[d * k_new + k];
  }
  T.angular = std::move(merged);
  T.radial.insert(T.radial.end(), rad.begin(), rad.end());
  T.K += k_new;
  (void)n;
}

std::vector<double> mirror_rows(const std::vector<double>& half, std::size_t rows, int N) {
  const auto h = static_cast<std::size_t>(N / 2);
  std::vector<double> full(rows * static_cast<std::size_t>(N));
  for (std::size_t d = 0; d < rows; ++d) {
    for (std::size_t j = 0; j < h; ++j) {
      const double v = half[d * h + j];
      full[d * 2 * h + h + j] = v;
      full[d * 2 * h + h - 1 - j] = v;
    }
  }
  return full;
}

std::vector<double> cos_table(const std::vector<double>& out_pts, const std::vector<double>& in_pts) {
  std::vector<double> tab(out_pts.size() * in_pts.size());
  for (std::size_t i = 0; i < out_pts.size(); ++i) {
    for (std::size_t j = 0; j < in_pts.size(); ++j) tab[i * in_pts.size() + j] = std::cos(out_pts[i] * in_pts[j]);
  }
  return tab;
}

}  // namespace

std::vector<double> LineGrid::positive() const {
  std::vector<double> out(static_cast<std::size_t>(half()));
  for (int j = 0; j < half(); ++j) out[static_cast<std::size_t>(j)] = (j + 0.5) * dt();
  return out;
}

DirectionSet DirectionSet::hemisphere(int n_polar, int n_azimuth) {
  DirectionSet s;
  s.grid = build_grid(n_polar, n_azimuth);
  s.nodes = s.grid->hemisphere();
  for (std::size_t n : s.nodes) {
    s.dirs.push_back(s.grid->nodes()[n]);
    s.weights.push_back(2.0 * s.grid->weights()[n]);
  }
  return s;
}

RadialProfile RadialProfile::make(std::function<double(double)> u, std::string name, Decay decay, double r_max,
                                  int n) {
  RadialProfile p;
  p.eval = std::move(u);
  p.name = std::move(name);
  p.decay = decay;
  p.r_max = r_max;
  p.dr = r_max / n;
  p.samples.resize(static_cast<std::size_t>(n));
  double mx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = p.eval((i + 0.5) * p.dr);
    p.samples[static_cast<std::size_t>(i)] = v;
    if (std::isfinite(v)) mx = std::max(mx, std::abs(v));
  }
  if (decay == Decay::Schwartz && std::abs(p.eval(r_max)) > 1e-8 * mx) {
    throw Error(ErrorCode::InputInvalid, "profile '" + p.name + "' has not decayed at r_max = " + std::to_string(r_max));
  }
  return p;
}

double SeparableTerm::operator()(const Vec3& x) const {
  if (value) return coefficient * value(x);
  const double r = norm(x);
  double v = profile ? (*profile)(r) : 0.0;
  if (angular) v *= evaluate(*angular->spectrum(), r > 0.0 ? x * (1.0 / r) : Vec3{0, 0, 1});
  return coefficient * v;
}

SeparableFunction::SeparableFunction(std::vector<SeparableTerm> terms, std::string name)
    : terms_(std::move(terms)), name_(std::move(name)) {}

SeparableFunction SeparableFunction::radial(RadialProfile profile) {
  SeparableTerm t;
  t.decay = profile.decay;
  std::string name = profile.name;
  t.profile = std::move(profile);
  t.radial = true;
  return SeparableFunction({std::move(t)}, std::move(name));
}

SeparableFunction SeparableFunction::product(RadialProfile profile, SphericalFunction angular) {
  if (angular.parity() != Parity::Even) angular = SphericalFunction(angular.grid(), angular.values(), Parity::Even);
  if (!angular.spectrum()) angular.with_spectrum(analyze(angular).even_part());
  SeparableTerm t;
  t.decay = profile.decay;
  std::string name = profile.name;
  t.profile = std::move(profile);
  t.angular = std::move(angular);
  t.radial = false;
  return SeparableFunction({std::move(t)}, std::move(name));
}

double SeparableFunction::operator()(const Vec3& x) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += t(x);
  return acc;
}

bool SeparableFunction::is_radial() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const SeparableTerm& t) { return t.radial; });
}

Decay SeparableFunction::decay() const {
  for (const auto& t : terms_) {
    if (t.decay == Decay::Algebraic) return Decay::Algebraic;
  }
  return Decay::Schwartz;
}

double SeparableFunction::support() const {
  double r = 0.0;
  for (const auto& t : terms_) r = std::max(r, t.profile ? t.profile->r_max : 16.0);
  return r > 0.0 ? r : 16.0;
}

std::vector<double> SeparableFunction::breakpoints() const {
  std::vector<double> b;
  for (const auto& t : terms_) {
    if (t.profile) b.insert(b.end(), t.profile->breakpoints.begin(), t.profile->breakpoints.end());
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

SeparableFunction SeparableFunction::scaled(double c) const {
  SeparableFunction out = *this;
  for (auto& t : out.terms_) t.coefficient *= c;
  return out;
}

SeparableFunction SeparableFunction::operator+(const SeparableFunction& o) const {
  SeparableFunction out = *this;
  out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
  return out;
}

SeparableFunction SeparableFunction::power(double q) const {
  if (q == 1.0) return *this;
  if (!is_radial()) throw Error(ErrorCode::InputInvalid, "pointwise powers are only supported for radial functions");
  if (q < 0.0) {
    throw Error(ErrorCode::InputInvalid,
                "power " + std::to_string(q) + " of a decaying function grows at infinity and leaves the admissible class");
  }
  if (q == 0.0) throw Error(ErrorCode::InputInvalid, "zeroth power is not integrable");
  const SeparableFunction base = *this;
  auto u = [base, q](double r) { return std::pow(std::abs(base(Vec3{0.0, 0.0, r})), q); };
  Decay decay = this->decay();
  RadialProfile p = RadialProfile::make(u, name_ + "^" + std::to_string(q), decay, support());
  if (decay == Decay::Algebraic) {
    double a = 0.0;
    for (const auto& t : terms_) {
      if (t.profile) a = std::max(a, t.profile->algebraic_order);
    }
    p.algebraic_order = a * q;
  }
  p.breakpoints = breakpoints();
  SeparableFunction out = SeparableFunction::radial(std::move(p));
  return out;
}

// ---------------------------------------------------------------------------

double Sinogram::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double Sinogram::evenness_defect() const {
  const int N = t_grid.N;
  double m = 0.0;
  for (std::size_t d = 0; d < directions.size(); ++d) {
    for (int i = 0; i < N / 2; ++i) m = std::max(m, std::abs(at(d, i) - at(d, N - 1 - i)));
  }
  const double s = max_abs();
  return s > 0.0 ? m / s : 0.0;
}

std::vector<double> Sinogram::masses() const {
  std::vector<double> out(directions.size(), 0.0);
  for (std::size_t d = 0; d < directions.size(); ++d) {
    double acc = 0.0;
    for (int i = 0; i < t_grid.N; ++i) acc += at(d, i);
    out[d] = acc * t_grid.dt();
  }
  return out;
}

Sinogram Sinogram::from_function(const std::function<double(double, const Vec3&)>& g, const LineGrid& lg,
                                 const DirectionSet& dirs) {
  Sinogram s;
  s.t_grid = lg;
  s.directions = dirs;
  const auto h = static_cast<std::size_t>(lg.half());
  std::vector<double> half(dirs.size() * h);
  const std::vector<double> t = lg.positive();
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    for (std::size_t j = 0; j < h; ++j) half[d * h + j] = g(t[j], dirs.dirs[d]);
  }
  s.values = mirror_rows(half, dirs.size(), lg.N);
  return s;
}

Sinogram radon_transform(const SeparableFunction& phi, const RadonOptions& opt) {
  return radon_transform(phi, opt.t_grid, DirectionSet::hemisphere(opt.dir_polar, opt.dir_azimuth));
}

Sinogram radon_transform(const SeparableFunction& phi, const LineGrid& lg, const DirectionSet& dirs) {
  const std::vector<double> t = lg.positive();
  const std::size_t h = t.size();
  const std::size_t nd = dirs.size();
  Tables tabs;
  std::vector<double> closed(nd * h, 0.0);
  for (const SeparableTerm& term : phi.terms()) {
    if (term.radon) {
      for (std::size_t d = 0; d < nd; ++d) {
        for (std::size_t j = 0; j < h; ++j) closed[d * h + j] += term.coefficient * term.radon(t[j], dirs.dirs[d]);
      }
      continue;
    }
    check_algebraic_radon(term);
    if (!term.profile) throw Error(ErrorCode::InputInvalid, "term has neither a profile nor a closed Radon transform");
    const RadialProfile& prof = *term.profile;
    const std::vector<int> ks = even_degrees(term);
    std::vector<double> rad(ks.size() * h, 0.0);
    integrate_adaptive([](double x) { return x; }, 0.0, 1.0);  // warm the rule tables before the parallel loop
    // degree 0: tail integral, accumulated cell by cell from the far end
    std::vector<double> cell(h, 0.0);
    const auto nh = static_cast<long>(h);
#pragma omp parallel for schedule(dynamic, 16) num_threads(kernels::threads())
    for (long j = 0; j < nh; ++j) {
      const double a = t[static_cast<std::size_t>(j)];
      const double b = std::min(j + 1 < nh ? t[static_cast<std::size_t>(j) + 1] : prof.r_max, prof.r_max);
      if (a >= b) continue;
      const GaussLegendre q = composite_gauss_legendre(a, b, 2, kPanelOrder);
      double v = 0.0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i) v += q.weights[i] * q.nodes[i] * prof(q.nodes[i]);
      cell[static_cast<std::size_t>(j)] = v;
    }
    double acc = 0.0;
    for (std::size_t j = h; j-- > 0;) {
      acc += cell[j];
      rad[j] = kTwoPi * term.coefficient * acc;
    }
    const auto nk = static_cast<long>((ks.size() - 1) * h);
#pragma omp parallel for schedule(dynamic, 8) num_threads(kernels::threads())
    for (long idx = 0; idx < nk; ++idx) {
      const std::size_t ki = 1 + static_cast<std::size_t>(idx) / h;
      const std::size_t j = static_cast<std::size_t>(idx) % h;
      const double tj = t[j];
      if (tj >= prof.r_max) continue;
      const int k = ks[ki];
      auto integrand = [&](double s) { return s * prof(s) * legendre(k, tj / s); };
      rad[ki * h + j] = kTwoPi * term.coefficient * integrate_split(integrand, tj, prof.r_max, prof.breakpoints);
    }
    append_tables(tabs, nd, h, degree_factors(term, ks, dirs), ks.size(), rad);
  }
  std::vector<double> half(nd * h, 0.0);
  if (tabs.K > 0) {
    kernels::SumOfProducts sp{nd, tabs.K, h, tabs.angular.data(), tabs.radial.data()};
    kernels::omp::sum_of_products(sp, half.data());
  }
  for (std::size_t i = 0; i < half.size(); ++i) half[i] += closed[i];
  Sinogram s;
  s.t_grid = lg;
  s.directions = dirs;
  s.values = mirror_rows(half, nd, lg.N);
  return s;
}

double radon_polar(const SeparableFunction& phi, double t, const Vec3& theta, int n_rho, int n_alpha) {
  const double R = phi.support();
  if (std::abs(t) >= R) return 0.0;
  const double rho_max = std::sqrt(R * R - t * t);
  Vec3 e1;
  Vec3 e2;
  const Vec3 th = normalized(theta);
  orthonormal_frame(th, e1, e2);
  std::vector<double> bps;
  for (double b : phi.breakpoints()) {
    if (b > std::abs(t)) bps.push_back(std::sqrt(b * b - t * t));
  }
  const GaussLegendre rule = radial_rule(rho_max, bps, n_rho / kPanelOrder);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double rho = rule.nodes[i];
    double ring = 0.0;
    for (int a = 0; a < n_alpha; ++a) {
      const double al = kTwoPi * a / n_alpha;
      ring += phi(th * t + (e1 * std::cos(al) + e2 * std::sin(al)) * rho);
    }
    acc += rule.weights[i] * rho * ring * kTwoPi / n_alpha;
  }
  return acc;
}

// ---------------------------------------------------------------------------

namespace {

// 4 pi (-1)^{k/2} int_0^R s^2 u(s) j_k(r s) ds for each r.
std::vector<double> hankel_table(const RadialProfile& prof, int k, const std::vector<double>& r) {
  std::vector<double> out(r.size(), 0.0);
  const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
  if (prof.decay == Decay::Algebraic) {
    if (k != 0) throw Error(ErrorCode::DecayTooSlow, "algebraic non-radial terms have no ray transform here");
    // (4 pi / r) int_0^inf s u(s) sin(r s) ds
    boost::math::quadrature::ooura_fourier_sin<double> ooura;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] == 0.0) {
        // phi^(0) = 4 pi int s^2 u(s) ds, finite only for u = o(s^-3)
        out[i] = prof.algebraic_order > 3.0
                     ? kFourPi * integrate_adaptive([&](double s) { return s * s * prof(s); }, 0.0, prof.r_max, 1e-12, 20)
                     : std::numeric_limits<double>::infinity();
        continue;
      }
      auto f = [&](double s) { return s * prof(s); };
      out[i] = kFourPi / r[i] * ooura.integrate(f, r[i]).first;
    }
    return out;
  }
  const GaussLegendre rule = radial_rule(prof.r_max, prof.breakpoints, 256);
  std::vector<double> w(rule.nodes.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double s = rule.nodes[j];
    w[j] = rule.weights[j] * s * s * prof(s);
  }
  const auto nr = static_cast<long>(r.size());
#pragma omp parallel for schedule(static) num_threads(kernels::threads())
  for (long i = 0; i < nr; ++i) {
    const double ri = r[static_cast<std::size_t>(i)];
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double x = ri * rule.nodes[j];
      const double jk = k == 0 ? (x == 0.0 ? 1.0 : std::sin(x) / x) : std::sph_bessel(static_cast<unsigned>(k), x);
      acc += w[j] * jk;
    }
    out[static_cast<std::size_t>(i)] = kFourPi * sign * acc;
  }
  return out;
}

}  // namespace

std::vector<double> fourier_on_directions(const SeparableFunction& f, const DirectionSet& dirs,
                                          const std::vector<double>& r) {
  const std::size_t nd = dirs.size();
  const std::size_t nr = r.size();
  Tables tabs;
  std::vector<double> closed(nd * nr, 0.0);
  for (const SeparableTerm& term : f.terms()) {
    if (term.fourier) {
      for (std::size_t d = 0; d < nd; ++d) {
        for (std::size_t j = 0; j < nr; ++j) closed[d * nr + j] += term.coefficient * term.fourier(r[j], dirs.dirs[d]);
      }
      continue;
    }
    if (!term.profile) throw Error(ErrorCode::InputInvalid, "term has neither a profile nor a closed Fourier transform");
    const std::vector<int> ks = even_degrees(term);
    std::vector<double> rad;
    rad.reserve(ks.size() * nr);
    for (int k : ks) {
      std::vector<double> row = hankel_table(*term.profile, k, r);
      for (double& v : row) v *= term.coefficient;
      rad.insert(rad.end(), row.begin(), row.end());
    }
    append_tables(tabs, nd, nr, degree_factors(term, ks, dirs), ks.size(), rad);
  }
  std::vector<double> out(nd * nr, 0.0);
  if (tabs.K > 0) {
    kernels::SumOfProducts sp{nd, tabs.K, nr, tabs.angular.data(), tabs.radial.data()};
    kernels::omp::sum_of_products(sp, out.data());
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += closed[i];
  return out;
}

std::vector<double> fourier_along_ray(const SeparableFunction& f, const Vec3& theta, const std::vector<double>& r) {
  DirectionSet one;
  one.dirs.push_back(normalized(theta));
  one.weights.push_back(1.0);
  return fourier_on_directions(f, one, r);
}

std::vector<double> cosine_transform(const LineGrid& lg, const std::vector<double>& m_pos, std::size_t batches) {
  const std::vector<double> pts = lg.positive();
  const std::vector<double> tab = cos_table(pts, pts);
  std::vector<double> out(batches * pts.size());
  kernels::CosineBatch cb{batches, pts.size(), pts.size(), 2.0 * lg.dt(), tab.data(), m_pos.data()};
  kernels::omp::cosine_batch(cb, out.data());
  return out;
}

Sinogram radon_via_fourier(const SeparableFunction& phi, const LineGrid& lg, const DirectionSet& dirs, double* tail) {
  const std::vector<double> r = lg.positive();
  std::vector<double> F = fourier_on_directions(phi, dirs, r);
  if (tail) {
    double mx = 0.0;
    double edge = 0.0;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      for (std::size_t j = 0; j < r.size(); ++j) mx = std::max(mx, std::abs(F[d * r.size() + j]));
      edge = std::max(edge, std::abs(F[d * r.size() + r.size() - 1]));
    }
    *tail = mx > 0.0 ? edge / mx : 0.0;
  }
  std::vector<double> half = cosine_transform(lg, F, dirs.size());
  for (double& v : half) v /= kTwoPi;
  Sinogram s;
  s.t_grid = lg;
  s.directions = dirs;
  s.values = mirror_rows(half, dirs.size(), lg.N);
  return s;
}

// ---------------------------------------------------------------------------

namespace {

IntersectionCertificate finish_certificate(IntersectionCertificate cert, double rel_tol) {
  const std::size_t nd = cert.directions.size();
  const std::vector<double> t = cert.t_grid.positive();
  const std::size_t h = t.size();
  cert.per_direction.resize(nd);
  double worst = 0.0;
  bool any_negative = false;
  double global_max = 0.0;
  for (double v : cert.M) global_max = std::max(global_max, std::abs(v));
  cert.tolerance = rel_tol * global_max;
  for (std::size_t d = 0; d < nd; ++d) {
    const double* row = cert.M.data() + d * h;
    std::size_t jmin = 0;
    double mx = 0.0;
    for (std::size_t j = 0; j < h; ++j) {
      if (row[j] < row[jmin]) jmin = j;
      mx = std::max(mx, std::abs(row[j]));
    }
    PDCertificate& c = cert.per_direction[d];
    // non-negative within -rel_tol max; the transform of a decaying m_theta
    // legitimately reaches zero inside the window, so there is no middle band
    c.verdict = row[jmin] < -rel_tol * mx ? Verdict::NotPositiveDefinite : Verdict::PositiveDefinite;
    c.witness_point = cert.directions.dirs[d];
    c.witness_t = t[jmin];
    c.witness_value = row[jmin];
    c.tolerance = rel_tol * mx;
    c.max_abs = mx;
    c.transform_1d.assign(row, row + h);
    if (c.verdict == Verdict::NotPositiveDefinite) {
      any_negative = true;
      cert.failing.push_back(d);
    }
    const double rel = mx > 0.0 ? row[jmin] / mx : 0.0;
    if (d == 0 || rel < worst) {
      worst = rel;
      cert.witness_direction = d;
      cert.witness_t = t[jmin];
      cert.witness_value = row[jmin];
    }
  }
  cert.overall = any_negative ? Verdict::NotPositiveDefinite : Verdict::PositiveDefinite;
  return cert;
}

}  // namespace

IntersectionCertificate certify_intersection_function(const SeparableFunction& f, const CertifyOptions& opt) {
  IntersectionCertificate cert;
  cert.t_grid = opt.grid;
  cert.directions = DirectionSet::hemisphere(opt.dir_polar, opt.dir_azimuth);
  cert.route = "fourier";
  const std::vector<double> r = opt.grid.positive();
  const std::size_t h = r.size();
  const std::size_t nd = cert.directions.size();
  std::vector<double> F = fourier_on_directions(f, cert.directions, r);
  cert.m.resize(nd * h);
  for (std::size_t d = 0; d < nd; ++d) {
    double mx = 0.0;
    for (std::size_t j = 0; j < h; ++j) {
      const double v = r[j] * r[j] * F[d * h + j];
      cert.m[d * h + j] = v;
      mx = std::max(mx, std::abs(v));
    }
    if (std::abs(cert.m[d * h + h - 1]) > 1e-6 * mx) {
      if (opt.spatial_fallback) return certify_intersection_spatial(f, opt);
      throw Error(ErrorCode::GridTooCoarse, "m_theta has not decayed at r = " + std::to_string(r.back()) +
                                                " (relative tail " +
                                                std::to_string(std::abs(cert.m[d * h + h - 1]) / mx) + ")");
    }
  }
  cert.M = cosine_transform(opt.grid, cert.m, nd);
  return finish_certificate(std::move(cert), opt.rel_tol);
}

IntersectionCertificate certify_intersection_spatial(const SeparableFunction& f, const CertifyOptions& opt) {
  IntersectionCertificate cert;
  cert.t_grid = opt.grid;
  cert.directions = DirectionSet::hemisphere(opt.dir_polar, opt.dir_azimuth);
  cert.route = "spatial";
  const Sinogram s = radon_transform(f, cert.t_grid, cert.directions);
  const int N = opt.grid.N;
  const int h = opt.grid.half();
  const double dt = opt.grid.dt();
  const std::size_t nd = cert.directions.size();
  cert.M.resize(nd * static_cast<std::size_t>(h));
  for (std::size_t d = 0; d < nd; ++d) {
    auto g = [&](int i) { return s.at(d, std::clamp(i, 0, N - 1)); };
    for (int j = 0; j < h; ++j) {
      const int i = h + j;
      const double d2 = (-g(i + 2) + 16.0 * g(i + 1) - 30.0 * g(i) + 16.0 * g(i - 1) - g(i - 2)) / (12.0 * dt * dt);
      cert.M[d * static_cast<std::size_t>(h) + static_cast<std::size_t>(j)] = -kTwoPi * d2;
    }
  }
  return finish_certificate(std::move(cert), opt.rel_tol);
}

// ---------------------------------------------------------------------------

std::vector<double> dual_radon_points(const Sinogram& g, const std::vector<Vec3>& points) {
  std::vector<double> pts(points.size() * 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    pts[3 * i] = points[i].x;
    pts[3 * i + 1] = points[i].y;
    pts[3 * i + 2] = points[i].z;
  }
  std::vector<double> dirs(g.directions.size() * 3);
  for (std::size_t i = 0; i < g.directions.size(); ++i) {
    dirs[3 * i] = g.directions.dirs[i].x;
    dirs[3 * i + 1] = g.directions.dirs[i].y;
    dirs[3 * i + 2] = g.directions.dirs[i].z;
  }
  kernels::DualRadon dr{points.size(),          g.directions.size(), static_cast<std::size_t>(g.t_grid.N),
                        g.t_grid.at(0),         g.t_grid.dt(),       pts.data(),
                        dirs.data(),            g.directions.weights.data(), g.values.data()};
  std::vector<double> out(points.size());
  kernels::omp::dual_radon(dr, out.data());
  return out;
}

GridFunction3D dual_radon(const Sinogram& g, const std::vector<double>& radii, const GridPtr& eval_grid) {
  std::vector<Vec3> points;
  points.reserve(radii.size() * eval_grid->size());
  for (double r : radii) {
    for (const Vec3& u : eval_grid->nodes()) points.push_back(u * r);
  }
  GridFunction3D out;
  out.radii = radii;
  out.sphere = eval_grid;
  out.values = dual_radon_points(g, points);
  return out;
}

IntersectionFunctionResult intersection_function_of(const Sinogram& g, const std::vector<double>& radii,
                                                    const GridPtr& eval_grid,
                                                    const std::function<double(double, const Vec3&)>& reference) {
  const LineGrid& lg = g.t_grid;
  const std::vector<double> r = lg.positive();
  const std::size_t h = r.size();
  const std::size_t nd = g.directions.size();
  IntersectionFunctionResult res;

  res.g_hat.resize(nd * h);
  if (g.transform) {
    for (std::size_t d = 0; d < nd; ++d) {
      for (std::size_t j = 0; j < h; ++j) res.g_hat[d * h + j] = g.transform(r[j], g.directions.dirs[d]);
    }
  } else {
    std::vector<double> pos(nd * h);
    for (std::size_t d = 0; d < nd; ++d) {
      for (std::size_t j = 0; j < h; ++j) pos[d * h + j] = g.at(d, lg.half() + static_cast<int>(j));
    }
    res.g_hat = cosine_transform(lg, pos, nd);
  }

  // C_theta(t) = int_0^inf g^(r) cos(r t) dr, which reproduces pi g
  std::vector<double> C = cosine_transform(lg, res.g_hat, nd);
  for (double& v : C) v *= 0.5;
  Sinogram cs;
  cs.t_grid = lg;
  cs.directions = g.directions;
  cs.values = mirror_rows(C, nd, lg.N);

  res.dual_route = dual_radon(g, radii, eval_grid);
  res.fourier_route = dual_radon(cs, radii, eval_grid);
  for (double& v : res.fourier_route.values) v /= kPi;
  double err = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < res.dual_route.values.size(); ++i) {
    err = std::max(err, std::abs(res.dual_route.values[i] - res.fourier_route.values[i]));
    scale = std::max(scale, std::abs(res.dual_route.values[i]));
  }
  res.route_agreement = scale > 0.0 ? err / scale : err;

  if (reference) {
    // g^_t(r) = pi / (2 pi)^3 r^2 f^(r theta)
    const double c = kPi / std::pow(kTwoPi, 3);
    double e = 0.0;
    double s = 0.0;
    for (std::size_t d = 0; d < nd; ++d) {
      for (std::size_t j = 0; j < h; ++j) {
        const double ref = c * r[j] * r[j] * reference(r[j], g.directions.dirs[d]);
        e = std::max(e, std::abs(res.g_hat[d * h + j] - ref));
        s = std::max(s, std::abs(ref));
      }
    }
    res.relation_residual = s > 0.0 ? e / s : e;
  }
  return res;
}

// ---------------------------------------------------------------------------

double RayMeasure::min() const { return *std::min_element(density.begin(), density.end()); }
double RayMeasure::max_abs() const {
  double m = 0.0;
  for (double v : density) m = std::max(m, std::abs(v));
  return m;
}

SeparableFunction symmetric_gaussian(double a, const Vec3& c) {
  SeparableTerm t;
  t.value = [a, c](const Vec3& x) {
    const Vec3 p = x - c;
    const Vec3 q = x + c;
    return std::exp(-a * dot(p, p)) + std::exp(-a * dot(q, q));
  };
  t.fourier = [a, c](double r, const Vec3& th) {
    return std::pow(kPi / a, 1.5) * std::exp(-r * r / (4.0 * a)) * 2.0 * std::cos(r * dot(c, th));
  };
  t.radon = [a, c](double s, const Vec3& th) {
    const double u = dot(c, th);
    return kPi / a * (std::exp(-a * (s - u) * (s - u)) + std::exp(-a * (s + u) * (s + u)));
  };
  t.radial = norm(c) == 0.0;
  RadialProfile support;
  support.r_max = norm(c) + 7.0 / std::sqrt(a);
  support.eval = [](double) { return 0.0; };
  support.name = "support";
  t.profile = support;
  return SeparableFunction({t}, "gauss(" + std::to_string(a) + ")");
}

double integrate_rn(const std::function<double(const Vec3&)>& fn, double R, int n_radial_panels, int sphere_polar,
                    const std::vector<double>& breakpoints) {
  const GaussLegendre rule = radial_rule(R, breakpoints, n_radial_panels);
  const GridPtr sph = build_grid(sphere_polar, 2 * sphere_polar);
  const auto& nodes = sph->nodes();
  const auto& w = sph->weights();
  std::vector<double> shell(rule.nodes.size());
  const auto nr = static_cast<long>(rule.nodes.size());
#pragma omp parallel for schedule(static) num_threads(kernels::threads())
  for (long i = 0; i < nr; ++i) {
    const double s = rule.nodes[static_cast<std::size_t>(i)];
    double acc = 0.0;
    for (std::size_t n = 0; n < nodes.size(); ++n) acc += w[n] * fn(nodes[n] * s);
    shell[static_cast<std::size_t>(i)] = rule.weights[static_cast<std::size_t>(i)] * s * s * acc;
  }
  double total = 0.0;
  for (double v : shell) total += v;
  return total;
}

WitnessResult classification_witness(const SeparableFunction& f, const IntersectionCertificate& cert,
                                     const std::vector<SeparableFunction>& tests, int quad_polar) {
  if (!cert.positive()) {
    throw Error(ErrorCode::CertificateRequired, "classification witness needs a positive intersection certificate");
  }
  if (tests.empty()) throw Error(ErrorCode::InputInvalid, "no test functions");
  WitnessResult res;
  const LineGrid& lg = cert.t_grid;
  const std::size_t nd = cert.directions.size();
  const std::size_t h = static_cast<std::size_t>(lg.half());
  std::vector<double> mu(cert.M);
  const double norm_c = 1.0 / (2.0 * std::pow(kTwoPi, 3));
  for (double& v : mu) v *= norm_c;
  res.measure.t_grid = lg;
  res.measure.directions = cert.directions;
  res.measure.density = mirror_rows(mu, nd, lg.N);
  res.measure_min = res.measure.min();
  const double mabs = res.measure.max_abs();
  for (std::size_t j = 0; j < h; ++j) {
    double lo = mu[j];
    double hi = mu[j];
    for (std::size_t d = 0; d < nd; ++d) {
      lo = std::min(lo, mu[d * h + j]);
      hi = std::max(hi, mu[d * h + j]);
    }
    res.theta_spread = std::max(res.theta_spread, mabs > 0.0 ? (hi - lo) / mabs : 0.0);
  }

  for (const SeparableFunction& phi : tests) {
    const double R = phi.support();
    const double lhs = integrate_rn([&](const Vec3& x) { return f(x) * phi(x); }, R, 48, quad_polar);
    const Sinogram rs = radon_transform(phi, lg, cert.directions);
    double rhs = 0.0;
    for (std::size_t d = 0; d < nd; ++d) {
      double line = 0.0;
      for (int i = 0; i < lg.N; ++i) line += rs.at(d, i) * res.measure.density[d * static_cast<std::size_t>(lg.N) + static_cast<std::size_t>(i)];
      rhs += cert.directions.weights[d] * line * lg.dt();
    }
    res.lhs.push_back(lhs);
    res.rhs.push_back(rhs);
  }
  res.calibration = res.lhs[0] / res.rhs[0];
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const double r = std::abs(res.lhs[i] - res.calibration * res.rhs[i]) / std::abs(res.lhs[i]);
    res.residuals.push_back(r);
    res.max_residual = std::max(res.max_residual, r);
  }
  return res;
}

}  // namespace radoncomp
