#include "radoncomp/catalog.hpp"

#include <cmath>
#include <memory>

#include "radoncomp/quadrature.hpp"

namespace radoncomp {

namespace {

struct Profile {
  std::function<double(double, double)> H;     // H(r; ell)
  std::function<double(double, double)> Hhat;  // H^(t; ell)
  std::function<double(double, double)> f;     // closed f(rho) for constant ell, small-rho safe
};

double need(const std::vector<double>& args, std::size_t i, double fallback, bool has_fallback, const std::string& name) {
  if (i < args.size()) return args[i];
  if (!has_fallback) throw Error(ErrorCode::InputInvalid, name + " needs " + std::to_string(i + 1) + " arguments");
  return fallback;
}

double safe_rho(double rho) { return std::max(rho, 1e-7); }

Profile make_profile(const std::string& name, const std::vector<double>& args) {
  Profile p;
  if (name == "gauss-r2") {
    const double a = need(args, 0, 1.0, true, name);
    p.H = [a](double r, double l) { return a * std::exp(-r * r * l); };
    p.Hhat = [a](double t, double l) { return a * std::sqrt(kPi / l) * std::exp(-t * t / (4.0 * l)); };
    p.f = [a](double rho, double l) {
      rho = safe_rho(rho);
      return kTwoPi * a * std::erf(rho / (2.0 * std::sqrt(l))) / rho;
    };
  } else if (name == "erf-type") {
    const double a = need(args, 0, 1.0, true, name);
    const double b = need(args, 1, 1.0, true, name);
    if (!(b > 0.0)) throw Error(ErrorCode::InputInvalid, "erf-type needs beta > 0");
    p.H = [a, b](double r, double l) { return a * std::sqrt(kPi / b) * l * std::exp(-r * r / (4.0 * b)); };
    p.Hhat = [a, b](double t, double l) { return kTwoPi * a * l * std::exp(-b * t * t); };
    p.f = [a, b](double rho, double l) {
      rho = safe_rho(rho);
      return kTwoPi * a * l * std::sqrt(kPi / b) * std::erf(std::sqrt(b) * rho) / rho;
    };
  } else if (name == "exp-ell" || name == "cauchy-ell") {
    p.H = [](double r, double l) { return std::exp(-std::abs(r) * l); };
    p.Hhat = [](double t, double l) { return 2.0 * l / (t * t + l * l); };
    p.f = [](double rho, double l) {
      rho = safe_rho(rho);
      return 4.0 * std::atan(rho / l) / rho;
    };
  } else if (name == "gamma-q") {
    const double q = need(args, 0, 0.0, false, name);
    if (!(q > 0.0)) throw Error(ErrorCode::InputInvalid, "gamma-q needs q > 0");
    const double R = std::pow(40.0, 1.0 / q);
    p.H = [q](double r, double l) { return l * std::exp(-std::pow(std::abs(r), q)); };
    p.Hhat = [q](double t, double l) { return l * gamma_q(q, t); };
    p.f = [q, R](double rho, double l) {
      rho = safe_rho(rho);
      auto g = [&](double r) { return r > 0.0 ? std::exp(-std::pow(r, q)) * std::sin(r * rho) / r : rho; };
      return 4.0 * l / rho * integrate_adaptive(g, 0.0, R, 1e-13, 24);
    };
  } else {
    throw Error(ErrorCode::InputInvalid, "unknown catalog entry '" + name + "'");
  }
  return p;
}

}  // namespace

std::vector<std::string> catalog_names() { return {"gauss-r2", "erf-type", "exp-ell", "cauchy-ell", "gamma-q"}; }

double gamma_q(double q, double t) {
  const double R = std::pow(40.0, 1.0 / q);
  auto g = [&](double r) { return std::exp(-std::pow(r, q)) * std::cos(r * t); };
  return 2.0 * integrate_adaptive(g, 0.0, R, 1e-13, 24);
}

Sinogram CatalogEntry::sinogram(const LineGrid& lg, const DirectionSet& dirs) const {
  Sinogram s = Sinogram::from_function(data, lg, dirs);
  s.transform = data_hat;
  return s;
}

CatalogEntry catalog_entry(const std::string& name, const std::vector<double>& args, AngularFn ell) {
  const Profile prof = make_profile(name, args);
  const double scale = name == "cauchy-ell" ? kTwoPi : 1.0;
  const bool constant = !ell;
  if (constant) ell = [](const Vec3&) { return 1.0; };

  auto ell_checked = [ell, name](const Vec3& th) {
    const double l = ell(th);
    if (!(l > 0.0)) throw Error(ErrorCode::InputInvalid, name + ": ell must be positive");
    return l;
  };

  CatalogEntry e;
  e.name = name;
  e.intersection = !(name == "gamma-q" && args[0] > 2.0);
  const double c8 = 8.0 * kPi * kPi * scale;
  e.m = [prof, ell_checked, c8](double r, const Vec3& th) { return c8 * prof.H(r, ell_checked(th)); };
  e.M = [prof, ell_checked, c8](double t, const Vec3& th) { return c8 * prof.Hhat(t, ell_checked(th)); };
  e.data = [prof, ell_checked, scale](double t, const Vec3& th) {
    return scale * prof.Hhat(t, ell_checked(th)) / kTwoPi;
  };
  e.data_hat = [prof, ell_checked, scale](double r, const Vec3& th) { return scale * prof.H(r, ell_checked(th)); };

  SeparableTerm term;
  term.radial = constant;
  term.decay = Decay::Algebraic;
  term.fourier = [prof, ell_checked, c8](double r, const Vec3& th) { return c8 * prof.H(r, ell_checked(th)) / (r * r); };
  if (constant) {
    term.value = [prof, scale](const Vec3& x) { return scale * prof.f(norm(x), 1.0); };
  } else {
    // f(x) = int_{S^2} g(<x, theta>, theta) d theta on a fixed grid
    auto grid = build_grid(32, 64);
    auto data = e.data;
    term.value = [grid, data](const Vec3& x) {
      double acc = 0.0;
      for (std::size_t n = 0; n < grid->size(); ++n) acc += grid->weights()[n] * data(dot(x, grid->nodes()[n]), grid->nodes()[n]);
      return acc;
    };
  }
  e.f = SeparableFunction({term}, name);
  return e;
}

double mollified_ball_profile(double s, double R, double sigma) {
  s = std::max(s / R, 1e-6);
  const double k = 1.0 / (sigma * std::sqrt(2.0));
  const double a = 1.0 - s;
  const double b = 1.0 + s;
  const double gauss = std::exp(-a * a * k * k) - std::exp(-b * b * k * k);
  return 0.5 * (std::erf(a * k) + std::erf(b * k)) - sigma / (s * std::sqrt(kTwoPi)) * gauss;
}

SeparableFunction mollified_ball(double R, double sigma, double amplitude) {
  if (!(R > 0.0 && sigma > 0.0)) throw Error(ErrorCode::InputInvalid, "ball radius and width must be positive");
  RadialProfile p = RadialProfile::make([R, sigma, amplitude](double s) { return amplitude * mollified_ball_profile(s, R, sigma); },
                                        "ball(" + std::to_string(R) + ")");
  p.breakpoints = {R};
  return SeparableFunction::radial(std::move(p));
}

}  // namespace radoncomp
