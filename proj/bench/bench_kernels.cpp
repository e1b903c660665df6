// Serial reference vs OpenMP kernels at the sizes the pipelines use.
// Prints one line per kernel: best-of-N wall time for each flavour, the
// speedup, and whether the outputs agree bit for bit.
//
//   bench_kernels [repeats] [threads]

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <vector>

#include "radoncomp/kernels.hpp"
#include "radoncomp/sphere.hpp"

using namespace radoncomp;

namespace {

double best_of(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, int repeats, const std::function<void(double*)>& ser,
            const std::function<void(double*)>& par, std::size_t n_out) {
  std::vector<double> a(n_out);
  std::vector<double> b(n_out);
  const double ts = best_of(repeats, [&] { ser(a.data()); });
  const double tp = best_of(repeats, [&] { par(b.data()); });
  const bool same = std::memcmp(a.data(), b.data(), n_out * sizeof(double)) == 0;
  std::printf("%-16s serial %9.3f ms   omp %9.3f ms   speedup %5.2fx   %s\n", name, 1e3 * ts, 1e3 * tp, ts / tp,
              same ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
  if (argc > 2) kernels::set_threads(std::atoi(argv[2]));
  std::printf("threads: %d\n", kernels::threads() > 0 ? kernels::threads() : omp_get_max_threads());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);

  {
    const GridPtr grid = build_grid(64, 128);
    const int L = 32;
    TransformPlan plan(*grid, L);
    const kernels::RingTables tab = plan.tables();
    std::vector<double> coeffs(HarmonicSpectrum::count(L));
    for (double& c : coeffs) c = U(rng);
    report("synthesize", repeats, [&](double* o) { kernels::serial::synthesize(tab, coeffs.data(), o); },
           [&](double* o) { kernels::omp::synthesize(tab, coeffs.data(), o); }, grid->size());
    std::vector<double> vals(grid->size());
    for (double& v : vals) v = U(rng);
    report("analyze", repeats, [&](double* o) { kernels::serial::analyze(tab, vals.data(), o); },
           [&](double* o) { kernels::omp::analyze(tab, vals.data(), o); }, coeffs.size());
  }
  {
    const std::size_t nd = 64, K = 9, nt = 1024;
    std::vector<double> ang(nd * K), rad(K * nt);
    for (double& v : ang) v = U(rng);
    for (double& v : rad) v = U(rng);
    const kernels::SumOfProducts s{nd, K, nt, ang.data(), rad.data()};
    report("sum_of_products", repeats, [&](double* o) { kernels::serial::sum_of_products(s, o); },
           [&](double* o) { kernels::omp::sum_of_products(s, o); }, nd * nt);
  }
  {
    const std::size_t nb = 64, n = 1024;
    std::vector<double> table(n * n), in(nb * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) table[i * n + j] = std::cos((i + 0.5) * (j + 0.5) / 4096.0);
    }
    for (double& v : in) v = U(rng);
    const kernels::CosineBatch c{nb, n, n, 1.0 / 64.0, table.data(), in.data()};
    report("cosine_batch", repeats, [&](double* o) { kernels::serial::cosine_batch(c, o); },
           [&](double* o) { kernels::omp::cosine_batch(c, o); }, nb * n);
  }
  {
    const std::size_t nd = 4096, nc = 128;
    std::vector<double> vals(nd * nc);
    for (double& v : vals) v = U(rng);
    const kernels::CircleSums c{nd, nc, vals.data()};
    report("circle_sums", repeats, [&](double* o) { kernels::serial::circle_sums(c, o); },
           [&](double* o) { kernels::omp::circle_sums(c, o); }, nd);
  }
  {
    const std::size_t np = 4096, nd = 1024, nt = 2048;
    std::vector<double> pts(np * 3), dirs(nd * 3), w(nd, 4.0 * M_PI / nd), vals(nd * nt);
    for (double& v : pts) v = 4.0 * U(rng);
    for (std::size_t d = 0; d < nd; ++d) {
      const Vec3 u = normalized(Vec3{U(rng), U(rng), U(rng)});
      dirs[3 * d] = u.x;
      dirs[3 * d + 1] = u.y;
      dirs[3 * d + 2] = u.z;
    }
    for (double& v : vals) v = U(rng);
    const kernels::DualRadon d{np, nd, nt, -16.0 + 1.0 / 128.0, 1.0 / 64.0, pts.data(), dirs.data(), w.data(),
                               vals.data()};
    report("dual_radon", repeats, [&](double* o) { kernels::serial::dual_radon(d, o); },
           [&](double* o) { kernels::omp::dual_radon(d, o); }, np);
  }
  return 0;
}
