#pragma once

// Worked intersection-function examples built from a non-negative
// direction-dependent profile H(r, theta), plus the mollified ball.
//
// For every entry:
//   f^(r theta)        = 8 pi^2 H(r, theta) / r^2
//   m_theta(r)         = 8 pi^2 H(r, theta)
//   data g(t, theta)   = H^(t, theta) / (2 pi), with 1D transform H
//   f(x)               = int_{S^2} g(<x, theta>, theta) d theta

#include <functional>
#include <string>
#include <vector>

#include "radoncomp/radon_rn.hpp"

namespace radoncomp {

using AngularFn = std::function<double(const Vec3&)>;

struct CatalogEntry {
  std::string name;
  SeparableFunction f;
  std::function<double(double, const Vec3&)> m;        // r^2 f^(r theta)
  std::function<double(double, const Vec3&)> M;        // int_R m cos(r t) dr, closed form
  std::function<double(double, const Vec3&)> data;     // g(t, theta)
  std::function<double(double, const Vec3&)> data_hat; // 1D transform of g in t
  bool intersection = true;                            // expected verdict

  Sinogram sinogram(const LineGrid& lg, const DirectionSet& dirs) const;
};

/// Known names: gauss-r2(alpha), erf-type(alpha, beta), exp-ell, cauchy-ell,
/// gamma-q(q). ell must be even and positive; nullptr means ell = 1.
/// InputInvalid for unknown names or bad arguments.
CatalogEntry catalog_entry(const std::string& name, const std::vector<double>& args, AngularFn ell = nullptr);

std::vector<std::string> catalog_names();

/// gamma_q(t) = int_R exp(-|r|^q) cos(r t) dr.
double gamma_q(double q, double t);

/// Unit-ball indicator convolved with a Gaussian of width sigma, scaled to
/// radius R (the width scales with R).
double mollified_ball_profile(double s, double R, double sigma);

/// amplitude * chi_{R B}^sigma(x) as a radial function, with the rim as breakpoint.
SeparableFunction mollified_ball(double R, double sigma = 1e-2, double amplitude = 1.0);

}  // namespace radoncomp
