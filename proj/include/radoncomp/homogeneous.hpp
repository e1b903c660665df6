#pragma once

// Fourier transforms of homogeneous extensions f(x/|x|) |x|^{-p} and
// positive-definiteness certificates built on them.
//
// For an even spherical harmonic Y of degree k and 0 < p < n,
//   (Y r^{-p})^ = lambda(n, k, p) Y r^{-n+p},
//   lambda(n, k, p) = (-1)^{k/2} pi^{n/2} 2^{n-p} Gamma((k+n-p)/2) / Gamma((k+p)/2).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radoncomp/sphere.hpp"

namespace radoncomp {

/// OutOfRange unless k is even and 0 < p < n.
double multiplier(int n, int k, double p);

/// Funk-Hecke eigenvalue of the spherical Radon transform on S^{n-1},
/// c_{n,k} = lambda(n, k, n-1) / pi; zero for odd k.
double funk_hecke(int n, int k);

class MultiplierTable {
 public:
  MultiplierTable(int n, int l_max);

  int n() const { return n_; }
  int l_max() const { return l_max_; }
  /// Per-degree factors lambda(n, k, p), zero for odd k. Cached per p.
  const std::vector<double>& lambda(double p) const;
  const std::vector<double>& funk() const { return funk_; }

 private:
  int n_;
  int l_max_;
  std::vector<double> funk_;
  mutable std::map<double, std::vector<double>> cache_;
};

/// Spectrum of g where (f r^{-p})^ = g r^{-3+p}. NotEven for spectra with odd
/// content above 1e-10 relative.
HarmonicSpectrum fourier_homogeneous(const HarmonicSpectrum& f, double p);

enum class Verdict { PositiveDefinite, NotPositiveDefinite, Inconclusive };
const char* to_string(Verdict v);

struct PDCertificate {
  Verdict verdict = Verdict::Inconclusive;
  Vec3 witness_point;                // direction of the minimum
  std::optional<double> witness_t;   // 1D frequency for ray certificates
  double witness_value = 0.0;
  double tolerance = 0.0;
  double max_abs = 0.0;
  double truncation_residual = 0.0;  // relative sup error of the band-limited power
  std::optional<SphericalFunction> transform;  // h on the grid (spherical case)
  std::vector<double> transform_1d;            // per-ray transform (ray case)

  bool positive() const { return verdict == Verdict::PositiveDefinite; }
};

/// Decides from min h against tol = rel_tol * max|h|.
Verdict classify(double min_value, double max_abs, double rel_tol = 1e-9);

struct PowerTransform {
  HarmonicSpectrum power;      // spectrum of f^q
  HarmonicSpectrum transform;  // spectrum of h, (f^q r^{-1})^ = h r^{-2}
  SphericalFunction h;
  double truncation_residual = 0.0;
};

/// f^q evaluated pointwise, analysed to l_max (default: twice the degree of f,
/// capped at the grid bandwidth) and mapped through lambda(3, k, 1).
PowerTransform power_transform(const SphericalFunction& f, double q, int l_max = -1);

/// Positive definiteness of |x|^{-1} f^q(x/|x|). NotPositive when min f <= 0.
PDCertificate certify_pd_r1(const SphericalFunction& f, double q, int l_max = -1);

struct ParsevalResult {
  double lhs = 0.0;   // int (f r^{-p})^ (g r^{-3+p})^
  double rhs = 0.0;   // (2 pi)^3 int f g
  double residual = 0.0;  // relative
  bool odd_part_dropped = false;
};

ParsevalResult spherical_parseval_check(const SphericalFunction& f, const SphericalFunction& g, double p,
                                        int l_max = -1);

}  // namespace radoncomp
