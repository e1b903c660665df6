#include "radoncomp/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

#include "radoncomp/common.hpp"

namespace radoncomp {

GaussLegendre gauss_legendre(int n) {
  GaussLegendre rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto ui = static_cast<std::size_t>(i);
    const auto mi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[ui] = x;
    rule.nodes[mi] = -x;
    rule.weights[ui] = w;
    rule.weights[mi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

GaussLegendre composite_gauss_legendre(double a, double b, int panels, int order) {
  const GaussLegendre base = gauss_legendre(order);
  GaussLegendre rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels * order));
  rule.weights.reserve(static_cast<std::size_t>(panels * order));
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int i = order - 1; i >= 0; --i) {
      const auto ui = static_cast<std::size_t>(i);
      rule.nodes.push_back(lo + 0.5 * h * (base.nodes[ui] + 1.0));
      rule.weights.push_back(0.5 * h * base.weights[ui]);
    }
  }
  return rule;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                          unsigned max_depth) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol);
}

double legendre(int k, double x) {
  if (k == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int j = 2; j <= k; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

void normalized_legendre(int l_max, double z, double* out) {
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  out[0] = 1.0 / std::sqrt(kFourPi);
  for (int m = 1; m <= l_max; ++m) {
    out[tri_index(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * out[tri_index(m - 1, m - 1)];
  }
  for (int m = 0; m < l_max; ++m) {
    out[tri_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * z * out[tri_index(m, m)];
  }
  for (int m = 0; m <= l_max; ++m) {
    for (int k = m + 2; k <= l_max; ++k) {
      const double kk = k;
      const double mm = m;
      const double a = std::sqrt((4.0 * kk * kk - 1.0) / (kk * kk - mm * mm));
      const double b = std::sqrt(((kk - 1.0) * (kk - 1.0) - mm * mm) / (4.0 * (kk - 1.0) * (kk - 1.0) - 1.0));
      out[tri_index(k, m)] = a * (z * out[tri_index(k - 1, m)] - b * out[tri_index(k - 2, m)]);
    }
  }
}

}  // namespace radoncomp
