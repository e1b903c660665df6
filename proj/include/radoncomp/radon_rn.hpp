#pragma once

// Classical Radon transform on R^3 for sums of separable terms
// u(|x|) l(x/|x|), Fourier transforms along rays, the relaxed
// intersection-function certificate and the dual Radon pipeline.
//
// Conventions: f^(xi) = int f(x) e^{-i<x,xi>} dx; 1D transforms of even data
// are cosine transforms over R.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "radoncomp/homogeneous.hpp"
#include "radoncomp/sphere.hpp"

namespace radoncomp {

/// Symmetric cell-centred grid on [-T, T]: t_i = -T + (i + 1/2) dt, dt = 2T/N.
/// Zero is never a node; N even.
struct LineGrid {
  double T = 16.0;
  int N = 2048;

  double dt() const { return 2.0 * T / N; }
  double at(int i) const { return -T + (i + 0.5) * dt(); }
  int half() const { return N / 2; }
  /// Non-negative half t_j = (j + 1/2) dt, j < N/2.
  std::vector<double> positive() const;
};

/// Hemisphere of a sphere grid with doubled weights (full-sphere quadrature
/// for even integrands).
struct DirectionSet {
  GridPtr grid;
  std::vector<std::size_t> nodes;
  std::vector<Vec3> dirs;
  std::vector<double> weights;

  static DirectionSet hemisphere(int n_polar, int n_azimuth);
  std::size_t size() const { return dirs.size(); }
};

enum class Decay { Schwartz, Algebraic };

struct RadialProfile {
  std::function<double(double)> eval;
  double r_max = 16.0;
  double dr = 0.0;
  std::vector<double> samples;       // u((i + 1/2) dr)
  Decay decay = Decay::Schwartz;
  double algebraic_order = 0.0;      // u ~ r^{-a} for algebraic profiles
  std::vector<double> breakpoints;   // radii where u changes steeply
  std::string name;

  /// Samples on n cells of [0, r_max]. InputInvalid if a Schwartz profile
  /// does not fall below 1e-8 max|u| at r_max.
  static RadialProfile make(std::function<double(double)> u, std::string name, Decay decay = Decay::Schwartz,
                            double r_max = 16.0, int n = 2048);
  double operator()(double r) const { return eval(r); }
};

/// One term of a separable function. Closed forms, when present, override
/// the numerical routes for that quantity.
struct SeparableTerm {
  std::optional<RadialProfile> profile;
  std::optional<SphericalFunction> angular;  // even, spectrum attached; absent = 1
  double coefficient = 1.0;
  std::function<double(const Vec3&)> value;                 // phi(x)
  std::function<double(double, const Vec3&)> fourier;       // phi^(r theta)
  std::function<double(double, const Vec3&)> radon;         // R phi(t, theta)
  bool radial = true;
  Decay decay = Decay::Schwartz;

  double operator()(const Vec3& x) const;
};

class SeparableFunction {
 public:
  SeparableFunction() = default;
  explicit SeparableFunction(std::vector<SeparableTerm> terms, std::string name = {});

  static SeparableFunction radial(RadialProfile profile);
  static SeparableFunction product(RadialProfile profile, SphericalFunction angular);

  const std::vector<SeparableTerm>& terms() const { return terms_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  double operator()(const Vec3& x) const;
  bool is_radial() const;
  Decay decay() const;
  /// Largest radius carrying mass (max profile r_max, 16 otherwise).
  double support() const;
  std::vector<double> breakpoints() const;

  SeparableFunction scaled(double c) const;
  SeparableFunction operator+(const SeparableFunction& o) const;

  /// Pointwise power |phi|^q for radial functions (and q = 1 for any).
  /// InputInvalid when the power leaves the decaying class.
  SeparableFunction power(double q) const;

 private:
  std::vector<SeparableTerm> terms_;
  std::string name_;
};

/// Rphi(t, theta) samples, full symmetric t grid, one row per direction.
struct Sinogram {
  LineGrid t_grid;
  DirectionSet directions;
  std::vector<double> values;  // n_dir x N
  /// Optional closed 1D transform g^(r, theta), overriding the numerics.
  std::function<double(double, const Vec3&)> transform;

  double at(std::size_t d, int i) const { return values[d * static_cast<std::size_t>(t_grid.N) + static_cast<std::size_t>(i)]; }
  double max_abs() const;
  /// max |g(t) - g(-t)| relative to max |g|.
  double evenness_defect() const;
  /// int g(t, theta) dt per direction.
  std::vector<double> masses() const;

  static Sinogram from_function(const std::function<double(double, const Vec3&)>& g, const LineGrid& lg,
                                const DirectionSet& dirs);
};

struct RadonOptions {
  LineGrid t_grid;
  int dir_polar = 8;
  int dir_azimuth = 16;
};

/// Legendre-reduced hyperplane integrals:
/// R[u l_k](t, theta) = l_k(theta) 2 pi int_{|t|}^inf s u(s) P_k(t/s) ds.
/// DecayTooSlow for algebraic profiles with non-integrable hyperplane sections.
Sinogram radon_transform(const SeparableFunction& phi, const RadonOptions& opt = {});
Sinogram radon_transform(const SeparableFunction& phi, const LineGrid& lg, const DirectionSet& dirs);

/// Reference hyperplane integral by 2D polar quadrature in <x, theta> = t.
double radon_polar(const SeparableFunction& phi, double t, const Vec3& theta, int n_rho = 256, int n_alpha = 128);

/// Fourier-slice route: Rphi(t, theta) = (1/pi) int_0^inf phi^(z theta) cos(z t) dz.
/// Also returns the relative tail |phi^(r_max)| / max.
Sinogram radon_via_fourier(const SeparableFunction& phi, const LineGrid& lg, const DirectionSet& dirs,
                           double* tail = nullptr);

/// phi^(r theta) for each r. Algebraic radial terms use an oscillatory
/// quadrature; algebraic non-radial terms raise DecayTooSlow.
std::vector<double> fourier_along_ray(const SeparableFunction& f, const Vec3& theta, const std::vector<double>& r);

/// phi^(r theta_d) for all directions, n_dir x r.size().
std::vector<double> fourier_on_directions(const SeparableFunction& f, const DirectionSet& dirs,
                                          const std::vector<double>& r);

/// Even cosine transform on a cell-centred grid:
/// out(t_i) = int_R m(r) cos(r t_i) dr from samples on the positive half.
std::vector<double> cosine_transform(const LineGrid& lg, const std::vector<double>& m_pos, std::size_t batches = 1);

struct IntersectionCertificate {
  Verdict overall = Verdict::Inconclusive;
  std::vector<PDCertificate> per_direction;
  std::size_t witness_direction = 0;
  double witness_t = 0.0;
  double witness_value = 0.0;
  double tolerance = 0.0;
  std::string route;            // "fourier" or "spatial"
  LineGrid t_grid;
  DirectionSet directions;
  std::vector<double> m;        // m_theta(r) on the positive half, n_dir x N/2
  std::vector<double> M;        // transform on the positive half, n_dir x N/2
  std::vector<std::size_t> failing;  // directions with a negative transform

  bool positive() const { return overall == Verdict::PositiveDefinite; }
};

struct CertifyOptions {
  LineGrid grid;
  int dir_polar = 8;
  int dir_azimuth = 16;
  double rel_tol = 1e-9;
  /// When m_theta does not decay on the r grid, fall back to
  /// M_theta(t) = -2 pi d^2/dt^2 Rphi(t, theta) (n = 3) instead of throwing.
  bool spatial_fallback = false;
};

/// m_theta(r) = r^2 f^(r theta) must be positive definite for every theta:
/// its cosine transform is tested for non-negativity. GridTooCoarse when the
/// tail of m_theta exceeds 1e-6 max at the grid boundary.
IntersectionCertificate certify_intersection_function(const SeparableFunction& f, const CertifyOptions& opt = {});

/// Five-point second difference route.
IntersectionCertificate certify_intersection_spatial(const SeparableFunction& f, const CertifyOptions& opt = {});

/// Radial x angular evaluation grid for functions produced from sinogram data.
struct GridFunction3D {
  std::vector<double> radii;
  GridPtr sphere;
  std::vector<double> values;  // radii.size() x sphere->size()

  double at(std::size_t ri, std::size_t node) const { return values[ri * sphere->size() + node]; }
};

/// f(x) = int_{S^2} g(<x, theta>, theta) d theta with cubic interpolation in t.
GridFunction3D dual_radon(const Sinogram& g, const std::vector<double>& radii, const GridPtr& eval_grid);
/// Same at arbitrary points.
std::vector<double> dual_radon_points(const Sinogram& g, const std::vector<Vec3>& points);

struct IntersectionFunctionResult {
  GridFunction3D fourier_route;   // (1/pi) (|x|^{-2} g^_t(|x|))^
  GridFunction3D dual_route;      // dual_radon
  double route_agreement = 0.0;   // max |A - B| / max |A|
  std::optional<double> relation_residual;  // g^_t(r) vs r^2 f^(r theta) pi / (2 pi)^3
  std::vector<double> g_hat;      // n_dir x N/2 on the positive r half
};

IntersectionFunctionResult intersection_function_of(
    const Sinogram& g, const std::vector<double>& radii, const GridPtr& eval_grid,
    const std::function<double(double, const Vec3&)>& reference_fourier = {});

struct RayMeasure {
  LineGrid t_grid;
  DirectionSet directions;
  std::vector<double> density;  // n_dir x N, full grid

  double min() const;
  double max_abs() const;
};

struct WitnessResult {
  RayMeasure measure;
  double calibration = 1.0;                 // c fixed on the first test function
  std::vector<double> lhs;                  // int f phi
  std::vector<double> rhs;                  // int int R phi d mu
  std::vector<double> residuals;            // |lhs - c rhs| / |lhs|
  double max_residual = 0.0;
  double measure_min = 0.0;
  double theta_spread = 0.0;                // max over t of the spread of mu across directions
};

/// Symmetrised Gaussian exp(-a|x-c|^2) + exp(-a|x+c|^2) with closed value,
/// Fourier transform and Radon transform.
SeparableFunction symmetric_gaussian(double a, const Vec3& c);

/// mu_theta = M_theta / (2 (2 pi)^3) and the pairing
/// int f phi = c int_{S^2} int R phi(t, theta) d mu_theta(t) d theta
/// on the given test functions. CertificateRequired when cert is not positive.
WitnessResult classification_witness(const SeparableFunction& f, const IntersectionCertificate& cert,
                                     const std::vector<SeparableFunction>& tests, int quad_polar = 48);

/// 3D integral of phi * chi over a ball of radius R by polar quadrature.
double integrate_rn(const std::function<double(const Vec3&)>& fn, double R, int n_radial_panels, int sphere_polar,
                    const std::vector<double>& breakpoints = {});

}  // namespace radoncomp
