#pragma once

// Comparison of L^p norms on R^3 under hyperplane-section domination, and the
// counterexample construction when the hypothesis side fails.

#include <vector>

#include "radoncomp/radon_rn.hpp"
#include "radoncomp/spherical_radon.hpp"

namespace radoncomp {

/// (int |phi|^p)^{1/p} by polar quadrature over the support ball.
/// TailTooHeavy when the outer tenth of the ball carries more than 1e-6 of
/// the integral.
double lp_norm_rn(const SeparableFunction& phi, double p);

/// int |phi|^p dx, same quadrature and tail test.
double power_integral_rn(const SeparableFunction& phi, double p);

/// min over all samples of b - a. GridMismatch unless the grids agree.
double sinogram_dominates(const Sinogram& a, const Sinogram& b);

struct RnComparisonReport {
  double p = 0.0;
  double domination_margin = 0.0;  // min (R psi - R phi)
  double domination_tol = 0.0;
  bool has_certificate = false;
  IntersectionCertificate certificate;
  double lp_phi = 0.0;
  double lp_psi = 0.0;
  bool hypothesis_holds = false;
  bool conclusion_holds = false;
  ComparisonStatus status = ComparisonStatus::HypothesisFails;
  // proof chain (p > 1)
  double int_power = 0.0;         // int phi^p
  double int_mixed = 0.0;         // int phi^{p-1} psi
  double pairing_residual = 0.0;  // int phi^{p-1} phi vs int int R phi d mu
  double holder_slack = 0.0;      // ||phi||_p^{p-1} ||psi||_p - int phi^{p-1} psi, relative
  double fubini_residual = 0.0;   // p = 1
  double fourier_slice_residual = 0.0;
};

struct RnComparisonOptions {
  CertifyOptions certify;
  /// Domination tolerance, relative to max R psi.
  double domination_rel_tol = 1e-9;
};

/// p = 1 compares integrals directly. p > 1 certifies phi^{p-1}; 0 < p < 1
/// certifies psi^{p-1}, which for decaying psi grows and is rejected with
/// InputInvalid.
RnComparisonReport verify_comparison_radon(const SeparableFunction& phi, const SeparableFunction& psi, double p,
                                           const RnComparisonOptions& opt = {});

struct RnCounterexample {
  SeparableFunction phi;   // case p > 1: psi - eta h
  SeparableFunction psi;
  SeparableFunction h;     // radial, R h(t) = bump(|t|)
  double eta = 0.0;
  int halvings = 0;
  double window_center = 0.0;
  double window_width = 0.0;
  std::size_t lattice_size = 0;
  std::vector<std::size_t> gamma;  // failing directions
  double norm_gap = 0.0;           // ||phi||_p^p - ||psi||_p^p
  double min_phi = 0.0;
  RnComparisonReport report;
};

/// Executes the construction for p > 1 on a smooth non-negative psi.
/// NotApplicable when psi^{p-1} is certified (or inconclusive),
/// ConstructionFailed when the norm gap stays below 1e-8 on the lattice.
RnCounterexample construct_counterexample_radon(const SeparableFunction& psi, double p,
                                                const RnComparisonOptions& opt = {});

/// C-infinity bump exp(-1/(1 - u^2)), u = (t - c)/w, and the radial h with
/// R h(t) = bump(|t|).
double window_bump(double t, double c, double w);
SeparableFunction bump_preimage(double c, double w);

}  // namespace radoncomp
