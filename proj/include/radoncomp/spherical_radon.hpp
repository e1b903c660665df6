#pragma once

// Spherical Radon (Funk) transform on S^2 and the comparison machinery built
// on it: verification of the spherical comparison theorem, the counterexample
// construction, the slicing inequality and intersection bodies.

#include <string>
#include <vector>

#include "radoncomp/homogeneous.hpp"
#include "radoncomp/sphere.hpp"

namespace radoncomp {

/// Great-circle integral of f over S^2 cap xi^perp, trapezoid rule on
/// n_circle points (0 picks max(64, 2 l_max + 2)). f must carry a spectrum or
/// is band-limited at its default degree first.
double sradon_direct(const SphericalFunction& f, const Vec3& xi, int n_circle = 0);

/// sradon_direct over a list of directions.
std::vector<double> sradon_direct_many(const SphericalFunction& f, const std::vector<Vec3>& xis, int n_circle = 0);

/// (Rf)_{k,m} = c_{3,k} f_{k,m}.
HarmonicSpectrum sradon_spectral(const HarmonicSpectrum& f);

/// Rf on the grid of f through the spectral route.
SphericalFunction sradon(const SphericalFunction& f, int l_max = -1);

enum class ComparisonStatus { Verified, HypothesisFails, DominationFails, ConclusionFails };
const char* to_string(ComparisonStatus s);

struct ComparisonReport {
  double p = 0.0;
  double domination_margin = 0.0;  // min over grid directions of Rg - Rf
  double domination_tol = 0.0;
  double direct_margin = 0.0;      // same, by great-circle quadrature on a coarse direction set
  bool has_certificate = false;
  PDCertificate pd_certificate;
  double lp_f = 0.0;
  double lp_g = 0.0;
  bool hypothesis_holds = false;
  bool conclusion_holds = false;
  ComparisonStatus status = ComparisonStatus::HypothesisFails;
  // proof chain
  double int_power = 0.0;        // p > 1: int f^p;     p < 1: int g^p
  double int_mixed = 0.0;        // p > 1: int f^{p-1} g; p < 1: int g^{p-1} f
  double pairing_residual = 0.0; // spectral replay of the Parseval step vs direct quadrature
  double holder_slack = 0.0;     // Hoelder (p > 1) or reverse Hoelder (p < 1) margin
  double fubini_residual = 0.0;  // p = 1: int Rf vs 2 pi int f
};

struct ComparisonOptions {
  int l_max = -1;           // spectral degree; default from the grid
  int direct_grid_polar = 8;  // coarse direction set for the direct domination re-check
  double tol = 1e-9;
};

ComparisonReport verify_comparison_spherical(const SphericalFunction& f, const SphericalFunction& g, double p,
                                             const ComparisonOptions& opt = {});

struct SphericalCounterexample {
  SphericalFunction f;   // case p > 1: g - eps phi; case p < 1: the input
  SphericalFunction g;   // case p > 1: the input;   case p < 1: f + eps phi
  SphericalFunction psi;
  SphericalFunction phi;
  double eps = 0.0;
  double delta = 0.0;
  double lift = 0.0;     // constant added to psi after band-limiting
  int halvings = 0;
  double norm_gap = 0.0; // |larger - smaller| in the direction the theorem forbids
  double min_positive = 0.0;  // min of the constructed function
  ComparisonReport report;
};

/// Executes the construction for p > 1 (input g) or 0 < p < 1 (input f).
/// NotApplicable when the power certificate is positive definite,
/// ConstructionFailed when no eps passes all three checks.
SphericalCounterexample construct_counterexample_spherical(const SphericalFunction& input, double p,
                                                           const ComparisonOptions& opt = {});

struct SlicingReport {
  double p = 0.0;
  bool dual = false;
  double lhs = 0.0;    // ||f||_p
  double rhs = 0.0;    // (4 pi)^{1/p} / (2 pi) * max Rf  (min Rf for the dual)
  double margin = 0.0; // rhs - lhs (lhs - rhs for the dual)
  Vec3 extremal_direction;
  double extremal_value = 0.0;
  bool hypothesis_holds = false;
  PDCertificate certificate;
  bool holds = false;
};

/// Slicing inequality ||f||_p <= (4 pi)^{1/p}/(2 pi) max Rf for p > 1, or the
/// reversed form with min Rf when dual is set (0 < p < 1).
SlicingReport slicing_check(const SphericalFunction& f, double p, bool dual = false, int l_max = -1);

struct StarBody {
  SphericalFunction radial;
  std::string name;
};

StarBody make_star_body(SphericalFunction radial, std::string name);

struct IntersectionBodyResult {
  StarBody body;
  double spectral_residual = 0.0;  // (rho_IL r^{-1})^ vs 4 pi^2 rho_L^2, relative
};

/// rho_IL = (1/2) R(rho_L^2), with the spectral cross-check.
IntersectionBodyResult intersection_body_of(const StarBody& L);

}  // namespace radoncomp
