#pragma once

// Discretisation of the unit sphere S^2: Gauss-Legendre x uniform-azimuth
// grids, real spherical-harmonic analysis/synthesis and L^p norms.
//
// Real orthonormal basis (no Condon-Shortley phase), with Pbar from
// quadrature.hpp and (theta, phi) the polar/azimuthal angles of u:
//   Y_{k,0}  = Pbar_k^0(cos theta)
//   Y_{k,m}  = sqrt(2) Pbar_k^m(cos theta) cos(m phi)      m > 0
//   Y_{k,-m} = sqrt(2) Pbar_k^m(cos theta) sin(m phi)      m > 0
// Coefficients are stored flat at index k*k + k + m (see HarmonicSpectrum::index).

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "radoncomp/common.hpp"
#include "radoncomp/kernels.hpp"

namespace radoncomp {

class SphereGrid {
 public:
  SphereGrid(int n_polar, int n_azimuth);

  int n_polar() const { return n_polar_; }
  int n_azimuth() const { return n_azimuth_; }
  std::size_t size() const { return nodes_.size(); }

  /// Largest degree that analyze() resolves exactly on this grid.
  int bandwidth() const;

  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& ring_z() const { return ring_z_; }
  const std::vector<double>& ring_weights() const { return ring_w_; }
  const std::vector<double>& azimuths() const { return phi_; }

  std::size_t index(int ring, int j) const {
    return static_cast<std::size_t>(ring) * static_cast<std::size_t>(n_azimuth_) + static_cast<std::size_t>(j);
  }
  std::size_t antipode(std::size_t node) const;

  /// Nodes of the closed upper hemisphere, one per antipodal pair.
  std::vector<std::size_t> hemisphere() const;

 private:
  int n_polar_;
  int n_azimuth_;
  std::vector<double> ring_z_;
  std::vector<double> ring_w_;
  std::vector<double> phi_;
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// InvalidGrid unless n_polar >= 2 and n_azimuth >= 4 is even.
GridPtr build_grid(int n_polar, int n_azimuth);

class HarmonicSpectrum {
 public:
  HarmonicSpectrum() = default;
  explicit HarmonicSpectrum(int l_max);

  static constexpr std::size_t index(int k, int m) {
    return static_cast<std::size_t>(k * k + k + m);
  }
  static constexpr std::size_t count(int l_max) { return static_cast<std::size_t>((l_max + 1) * (l_max + 1)); }

  int l_max() const { return l_max_; }
  double operator()(int k, int m) const { return coeffs_[index(k, m)]; }
  double& operator()(int k, int m) { return coeffs_[index(k, m)]; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  /// True when every odd-degree coefficient is below rel_tol * max |a|.
  bool is_even(double rel_tol = 1e-10) const;
  /// Largest |a_{k,m}| over odd k.
  double odd_magnitude() const;
  HarmonicSpectrum even_part() const;
  HarmonicSpectrum resized(int l_max) const;
  double max_abs() const;

  HarmonicSpectrum& operator+=(const HarmonicSpectrum& o);
  HarmonicSpectrum& operator*=(double s);
  /// Multiplies degree k by factors[k].
  HarmonicSpectrum scaled_by_degree(std::span<const double> factors) const;

 private:
  int l_max_ = -1;
  std::vector<double> coeffs_;
};

HarmonicSpectrum operator+(HarmonicSpectrum a, const HarmonicSpectrum& b);
HarmonicSpectrum operator-(HarmonicSpectrum a, const HarmonicSpectrum& b);
HarmonicSpectrum operator*(double s, HarmonicSpectrum a);

enum class Parity { None, Even, Odd };

class SphericalFunction {
 public:
  SphericalFunction() = default;
  /// Throws NotEven when parity == Even and antipodal samples disagree by more
  /// than 1e-10 relative to max |value|.
  SphericalFunction(GridPtr grid, std::vector<double> values, Parity parity = Parity::None);

  static SphericalFunction sample(GridPtr grid, const std::function<double(const Vec3&)>& f,
                                  Parity parity = Parity::None);
  static SphericalFunction constant(GridPtr grid, double c);

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  Parity parity() const { return parity_; }
  const std::optional<HarmonicSpectrum>& spectrum() const { return spectrum_; }

  SphericalFunction& with_spectrum(HarmonicSpectrum s) {
    spectrum_ = std::move(s);
    return *this;
  }

  double min() const;
  double max() const;
  double max_abs() const;
  std::size_t argmin() const;
  std::size_t argmax() const;
  bool strictly_positive() const { return min() > 0.0; }

  /// Off-grid evaluation; requires an attached spectrum.
  double operator()(const Vec3& u) const;

  /// Pointwise map; the spectrum is dropped.
  SphericalFunction map(const std::function<double(double)>& fn) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  std::optional<HarmonicSpectrum> spectrum_;
  Parity parity_ = Parity::None;
};

/// Precomputed Legendre/azimuth tables for one (grid, l_max) pair.
class TransformPlan {
 public:
  TransformPlan(const SphereGrid& grid, int l_max);
  TransformPlan(const TransformPlan&) = delete;
  TransformPlan& operator=(const TransformPlan&) = delete;
  const kernels::RingTables& tables() const { return tab_; }

 private:
  std::vector<double> legendre_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  std::vector<double> ring_w_;
  kernels::RingTables tab_;
};

/// Quadrature projection onto Y_{k,m}, k <= l_max. l_max < 0 selects half the
/// grid bandwidth (the default 2x aliasing margin).
HarmonicSpectrum analyze(const SphericalFunction& f, int l_max = -1);
SphericalFunction synthesize(const HarmonicSpectrum& s, const GridPtr& grid);

/// Pointwise value of sum a_{k,m} Y_{k,m}(u).
double evaluate(const HarmonicSpectrum& s, const Vec3& u);
/// Values of sum_m a_{k,m} Y_{k,m}(u), one entry per degree k.
std::vector<double> evaluate_by_degree(const HarmonicSpectrum& s, const Vec3& u);
/// Y_{k,m}(u) for all k <= l_max, flat layout of HarmonicSpectrum.
std::vector<double> basis_values(int l_max, const Vec3& u);

/// Analyze and attach the spectrum (l_max as in analyze()).
SphericalFunction band_limited(const SphericalFunction& f, int l_max = -1);

double integrate(const SphericalFunction& f);
double inner(const SphericalFunction& f, const SphericalFunction& g);
double lp_norm_sphere(const SphericalFunction& f, double p);

struct ReverseHolderResult {
  bool holds = false;
  double margin = 0.0;  // ||hw||_1 - ||h||_{1/r} ||w||_{-1/(r-1)}
  double lhs = 0.0;
  double rhs = 0.0;
};

ReverseHolderResult reverse_holder_check(const SphericalFunction& h, const SphericalFunction& w, double r,
                                         double tol = 1e-10);

}  // namespace radoncomp
