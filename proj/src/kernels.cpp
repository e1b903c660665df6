#include "radoncomp/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "radoncomp/common.hpp"
#include "radoncomp/quadrature.hpp"

namespace radoncomp::kernels {

namespace {

int g_threads = 0;

int team_size() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

template <bool Par>
void synthesize_impl(const RingTables& tab, const double* coeffs, double* out) {
  const int L = tab.l_max;
  const int na = tab.n_azimuth;
  const std::size_t tri = tri_size(L);
#pragma omp parallel for schedule(static) num_threads(team_size()) if (Par)
  for (int i = 0; i < tab.n_polar; ++i) {
    const double* P = tab.legendre + static_cast<std::size_t>(i) * tri;
    std::vector<double> A(static_cast<std::size_t>(L + 1), 0.0);
    std::vector<double> B(static_cast<std::size_t>(L + 1), 0.0);
    for (int m = 0; m <= L; ++m) {
      double a = 0.0;
      double b = 0.0;
      for (int k = m; k <= L; ++k) {
        const double p = P[tri_index(k, m)];
        a += coeffs[k * k + k + m] * p;
        if (m > 0) b += coeffs[k * k + k - m] * p;
      }
      const double s = m > 0 ? std::sqrt(2.0) : 1.0;
      A[static_cast<std::size_t>(m)] = s * a;
      B[static_cast<std::size_t>(m)] = s * b;
    }
    double* row = out + static_cast<std::size_t>(i) * static_cast<std::size_t>(na);
    for (int j = 0; j < na; ++j) {
      double v = A[0];
      for (int m = 1; m <= L; ++m) {
        const std::size_t o = static_cast<std::size_t>(m) * static_cast<std::size_t>(na) + static_cast<std::size_t>(j);
        v += A[static_cast<std::size_t>(m)] * tab.cos_m[o] + B[static_cast<std::size_t>(m)] * tab.sin_m[o];
      }
      row[j] = v;
    }
  }
}

template <bool Par>
void analyze_impl(const RingTables& tab, const double* values, double* coeffs) {
  const int L = tab.l_max;
  const int na = tab.n_azimuth;
  const int np = tab.n_polar;
  const std::size_t tri = tri_size(L);
  const auto stride = static_cast<std::size_t>(L + 1);
  std::vector<double> C(static_cast<std::size_t>(np) * stride);
  std::vector<double> S(static_cast<std::size_t>(np) * stride);
#pragma omp parallel for schedule(static) num_threads(team_size()) if (Par)
  for (int i = 0; i < np; ++i) {
    const double* row = values + static_cast<std::size_t>(i) * static_cast<std::size_t>(na);
    for (int m = 0; m <= L; ++m) {
      const double* cm = tab.cos_m + static_cast<std::size_t>(m) * static_cast<std::size_t>(na);
      const double* sm = tab.sin_m + static_cast<std::size_t>(m) * static_cast<std::size_t>(na);
      double c = 0.0;
      double s = 0.0;
      for (int j = 0; j < na; ++j) {
        c += row[j] * cm[j];
        s += row[j] * sm[j];
      }
      const double w = tab.ring_weight[i];
      C[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(m)] = w * c;
      S[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(m)] = w * s;
    }
  }
#pragma omp parallel for schedule(dynamic) num_threads(team_size()) if (Par)
  for (int k = 0; k <= L; ++k) {
    for (int m = 0; m <= k; ++m) {
      double a = 0.0;
      double b = 0.0;
      for (int i = 0; i < np; ++i) {
        const double p = tab.legendre[static_cast<std::size_t>(i) * tri + tri_index(k, m)];
        a += p * C[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(m)];
        b += p * S[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(m)];
      }
      if (m == 0) {
        coeffs[k * k + k] = a;
      } else {
        coeffs[k * k + k + m] = std::sqrt(2.0) * a;
        coeffs[k * k + k - m] = std::sqrt(2.0) * b;
      }
    }
  }
}

template <bool Par>
void sum_of_products_impl(const SumOfProducts& s, double* out) {
  const auto nd = static_cast<long>(s.n_dir);
#pragma omp parallel for schedule(static) num_threads(team_size()) if (Par)
  for (long d = 0; d < nd; ++d) {
    double* row = out + static_cast<std::size_t>(d) * s.n_t;
    std::fill(row, row + s.n_t, 0.0);
    for (std::size_t k = 0; k < s.n_terms; ++k) {
      const double a = s.angular[static_cast<std::size_t>(d) * s.n_terms + k];
      const double* rad = s.radial + k * s.n_t;
      for (std::size_t i = 0; i < s.n_t; ++i) row[i] += a * rad[i];
    }
  }
}

template <bool Par>
void cosine_batch_impl(const CosineBatch& c, double* out) {
  const auto total = static_cast<long>(c.n_batch * c.n_out);
#pragma omp parallel for schedule(static) num_threads(team_size()) if (Par)
  for (long idx = 0; idx < total; ++idx) {
    const std::size_t b = static_cast<std::size_t>(idx) / c.n_out;
    const std::size_t i = static_cast<std::size_t>(idx) % c.n_out;
    const double* in = c.in + b * c.n_in;
    const double* row = c.table + i * c.n_in;
    double acc = 0.0;
    for (std::size_t j = 0; j < c.n_in; ++j) acc += in[j] * row[j];
    out[static_cast<std::size_t>(idx)] = c.scale * acc;
  }
}

template <bool Par>
void circle_sums_impl(const CircleSums& c, double* out) {
  const auto nd = static_cast<long>(c.n_dir);
  const double h = kTwoPi / static_cast<double>(c.n_circle);
#pragma omp parallel for schedule(static) num_threads(team_size()) if (Par)
  for (long d = 0; d < nd; ++d) {
    const double* v = c.values + static_cast<std::size_t>(d) * c.n_circle;
    double acc = 0.0;
    for (std::size_t j = 0; j < c.n_circle; ++j) acc += v[j];
    out[d] = h * acc;
  }
}

template <bool Par>
void dual_radon_impl(const DualRadon& d, double* out) {
  const auto np = static_cast<long>(d.n_points);
#pragma omp parallel for schedule(static) num_threads(team_size()) if (Par)
  for (long p = 0; p < np; ++p) {
    const double* x = d.points + 3 * static_cast<std::size_t>(p);
    double acc = 0.0;
    for (std::size_t k = 0; k < d.n_dir; ++k) {
      const double* th = d.directions + 3 * k;
      const double s = std::abs(x[0] * th[0] + x[1] * th[1] + x[2] * th[2]);
      acc += d.weights[k] * interp_uniform(d.values + k * d.n_t, d.n_t, d.t0, d.dt, s);
    }
    out[p] = acc;
  }
}

}  // namespace

double interp_uniform(const double* y, std::size_t n, double x0, double dx, double x) {
  const double last = x0 + dx * static_cast<double>(n - 1);
  if (x < x0 - 0.5 * dx || x > last + 0.5 * dx) return 0.0;
  x = std::clamp(x, x0, last);
  const double u = (x - x0) / dx;
  auto i = static_cast<long>(std::floor(u));
  const long nn = static_cast<long>(n);
  i = std::clamp(i, 0L, nn - 1);
  const double f = u - static_cast<double>(i);
  auto at = [&](long j) { return y[std::clamp(j, 0L, nn - 1)]; };
  const double p0 = at(i - 1);
  const double p1 = at(i);
  const double p2 = at(i + 1);
  const double p3 = at(i + 2);
  return p1 + 0.5 * f * (p2 - p0 + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + f * (3.0 * (p1 - p2) + p3 - p0)));
}

void set_threads(int n) { g_threads = std::max(0, n); }
int threads() { return team_size(); }

namespace serial {
void synthesize(const RingTables& tab, const double* coeffs, double* out) { synthesize_impl<false>(tab, coeffs, out); }
void analyze(const RingTables& tab, const double* values, double* coeffs) { analyze_impl<false>(tab, values, coeffs); }
void sum_of_products(const SumOfProducts& s, double* out) { sum_of_products_impl<false>(s, out); }
void cosine_batch(const CosineBatch& c, double* out) { cosine_batch_impl<false>(c, out); }
void circle_sums(const CircleSums& c, double* out) { circle_sums_impl<false>(c, out); }
void dual_radon(const DualRadon& d, double* out) { dual_radon_impl<false>(d, out); }
}  // namespace serial

namespace omp {
void synthesize(const RingTables& tab, const double* coeffs, double* out) { synthesize_impl<true>(tab, coeffs, out); }
void analyze(const RingTables& tab, const double* values, double* coeffs) { analyze_impl<true>(tab, values, coeffs); }
void sum_of_products(const SumOfProducts& s, double* out) { sum_of_products_impl<true>(s, out); }
void cosine_batch(const CosineBatch& c, double* out) { cosine_batch_impl<true>(c, out); }
void circle_sums(const CircleSums& c, double* out) { circle_sums_impl<true>(c, out); }
void dual_radon(const DualRadon& d, double* out) { dual_radon_impl<true>(d, out); }
}  // namespace omp

}  // namespace radoncomp::kernels
