#pragma once

// Hot loops in two flavours: `serial` is the reference, `omp` parallelises
// over independent outputs only. Every output element is produced by the same
// fixed-order sum in both, so results agree bit for bit.

#include <cstddef>

namespace radoncomp::kernels {

/// Legendre and azimuthal tables for transforms on a Gauss-Legendre grid.
struct RingTables {
  int n_polar = 0;
  int n_azimuth = 0;
  int l_max = 0;
  const double* legendre = nullptr;  // n_polar x tri_size(l_max)
  const double* cos_m = nullptr;     // (l_max+1) x n_azimuth, cos(m phi_j)
  const double* sin_m = nullptr;     // (l_max+1) x n_azimuth, sin(m phi_j)
  const double* ring_weight = nullptr;  // per ring, includes the 2 pi / n_azimuth factor
};

/// Dense radial table for a sinogram: value(d, i) = sum_k ang[d*K + k] * rad[k*nt + i].
struct SumOfProducts {
  std::size_t n_dir = 0;
  std::size_t n_terms = 0;
  std::size_t n_t = 0;
  const double* angular = nullptr;  // n_dir x n_terms
  const double* radial = nullptr;   // n_terms x n_t
};

/// Even cosine transform on a cell-centred grid:
/// out[b][i] = scale * sum_j in[b][j] * table[i*n_in + j].
struct CosineBatch {
  std::size_t n_batch = 0;
  std::size_t n_in = 0;
  std::size_t n_out = 0;
  double scale = 1.0;
  const double* table = nullptr;
  const double* in = nullptr;
};

/// Great-circle trapezoid sums for a band-limited function.
/// For each direction d: out[d] = (2 pi / n_circle) * sum_j f(points[d][j]).
/// `values` holds the function already evaluated at the circle points.
struct CircleSums {
  std::size_t n_dir = 0;
  std::size_t n_circle = 0;
  const double* values = nullptr;  // n_dir x n_circle
};

/// Discretised dual Radon transform: out[x] = sum_d w[d] * interp(g_d, <x, theta_d>).
struct DualRadon {
  std::size_t n_points = 0;
  std::size_t n_dir = 0;
  std::size_t n_t = 0;
  double t0 = 0.0;  // first grid abscissa
  double dt = 0.0;
  const double* points = nullptr;      // n_points x 3
  const double* directions = nullptr;  // n_dir x 3
  const double* weights = nullptr;     // n_dir
  const double* values = nullptr;      // n_dir x n_t
};

namespace serial {
void synthesize(const RingTables& tab, const double* coeffs, double* out);
void analyze(const RingTables& tab, const double* values, double* coeffs);
void sum_of_products(const SumOfProducts& s, double* out);
void cosine_batch(const CosineBatch& c, double* out);
void circle_sums(const CircleSums& c, double* out);
void dual_radon(const DualRadon& d, double* out);
}  // namespace serial

namespace omp {
void synthesize(const RingTables& tab, const double* coeffs, double* out);
void analyze(const RingTables& tab, const double* values, double* coeffs);
void sum_of_products(const SumOfProducts& s, double* out);
void cosine_batch(const CosineBatch& c, double* out);
void circle_sums(const CircleSums& c, double* out);
void dual_radon(const DualRadon& d, double* out);
}  // namespace omp

/// Cubic (Catmull-Rom) interpolation on a uniform grid, zero outside
/// [x_0, x_{n-1}].
double interp_uniform(const double* y, std::size_t n, double x0, double dx, double x);

/// Thread count used by the omp kernels; 0 leaves the OpenMP default.
void set_threads(int n);
int threads();

}  // namespace radoncomp::kernels
