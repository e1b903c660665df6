#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace radoncomp {

/// Gauss-Legendre rule on [-1, 1]. Nodes are sorted in descending order and
/// mirrored exactly (node[i] == -node[n-1-i]).
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels of
/// `order` points each. Returned nodes ascend.
GaussLegendre composite_gauss_legendre(double a, double b, int panels, int order = 16);

/// Adaptive Gauss-Kronrod integral of f over [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-13, unsigned max_depth = 18);

/// Legendre polynomial P_k(x) by the three-term recurrence.
double legendre(int k, double x);

/// Fully normalised associated Legendre values without Condon-Shortley phase:
///   Pbar_k^m(z) = sqrt((2k+1)/(4 pi) (k-m)!/(k+m)!) P_k^m(z),  0 <= m <= k <= l_max.
/// Packed triangularly, see tri_index.
void normalized_legendre(int l_max, double z, double* out);

constexpr std::size_t tri_index(int k, int m) {
  return static_cast<std::size_t>(k) * static_cast<std::size_t>(k + 1) / 2 + static_cast<std::size_t>(m);
}
constexpr std::size_t tri_size(int l_max) { return tri_index(l_max + 1, 0); }

}  // namespace radoncomp
