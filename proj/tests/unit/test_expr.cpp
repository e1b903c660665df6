#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "radoncomp/expr.hpp"
#include "radoncomp/quadrature.hpp"
#include "util.hpp"

using namespace radoncomp;

namespace {

double eval(const std::string& s, Env env = {}) { return Expr::parse(s)(env); }

std::string error_message(const std::string& s) {
  try {
    Expr::parse(s);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 11);
  std::uniform_real_distribution<double> num(0.0, 5.0);
  const char* vars[] = {"x", "y", "z", "r", "pi"};
  switch (pick(rng)) {
    case 0: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", num(rng));
      return buf;
    }
    case 1:
    case 2: return vars[std::uniform_int_distribution<int>(0, 4)(rng)];
    case 3: return random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1);
    case 4: return random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1);
    case 5: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
    case 6: return random_expr(rng, depth - 1) + "/(2 + " + random_expr(rng, depth - 1) + "^2)";
    case 7: return "-" + random_expr(rng, depth - 1);
    case 8: return "(" + random_expr(rng, depth - 1) + ")^2";
    case 9: return "exp(-abs(" + random_expr(rng, depth - 1) + "))";
    case 10: return "max(" + random_expr(rng, depth - 1) + ", " + random_expr(rng, depth - 1) + ")";
    default: return "legendre(4, " + random_expr(rng, depth - 1) + ")";
  }
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(eval("1 + 2*3") == 7.0);
  CHECK(eval("(1 + 2)*3") == 9.0);
  CHECK(eval("2^3^2") == 512.0);
  CHECK(eval("-2^2") == -4.0);
  CHECK(eval("8/4/2") == 1.0);
  CHECK(eval("1 - 2 - 3") == -4.0);
  CHECK(eval("1.5e1") == 15.0);
  CHECK(std::abs(eval("pi") - kPi) < 1e-15);
  CHECK(eval("min(3, max(1, 2))") == 2.0);
  CHECK(std::abs(eval("sqrt(2)^2") - 2.0) < 1e-15);
}

TEST_CASE("variables and builtins") {
  Env e;
  e.x = 0.6;
  e.z = 0.8;
  e.r = 2.0;
  CHECK(std::abs(eval("x^2 + z^2", e) - 1.0) < 1e-15);
  CHECK(std::abs(eval("gauss(2)", e) - std::exp(-1.0)) < 1e-15);
  CHECK(std::abs(eval("erf(r)", e) - std::erf(2.0)) < 1e-15);
  CHECK(std::abs(eval("legendre(3, z)", e) - legendre(3, 0.8)) < 1e-15);
  auto g = Expr::parse("1 + 0.8*legendre(2, z)");
  CHECK(std::abs(g.angular({0, 0, 1}) - 1.8) < 1e-15);
  CHECK(std::abs(g.angular({1, 0, 0}) - 0.6) < 1e-15);
  auto b = Expr::parse("bump(1, 2)");
  CHECK(b.radial(0.5) == 0.0);
  CHECK(b.radial(1.5) > 0.0);
  CHECK(b.radial(2.5) == 0.0);
  CHECK(std::abs(Expr::parse("ball(1)").radial(0.2) - 1.0) < 1e-12);
}

TEST_CASE("error positions") {
  CHECK(error_message("1 + (").find("1:5") != std::string::npos);
  CHECK_ERROR_CODE(Expr::parse("1 + ("), ErrorCode::SyntaxError);
  CHECK_ERROR_CODE(Expr::parse("1 +* 2"), ErrorCode::SyntaxError);
  CHECK_ERROR_CODE(Expr::parse("2 3"), ErrorCode::SyntaxError);
  CHECK_ERROR_CODE(Expr::parse(""), ErrorCode::SyntaxError);
  CHECK_ERROR_CODE(Expr::parse("foo + 1"), ErrorCode::UnknownIdentifier);
  CHECK(error_message("1 +\n  foo").find("2:3") != std::string::npos);
  CHECK_ERROR_CODE(Expr::parse("exp(1, 2)"), ErrorCode::ArityError);
  CHECK_ERROR_CODE(Expr::parse("legendre(2)"), ErrorCode::ArityError);
  CHECK_ERROR_CODE(Expr::parse("exp + 1"), ErrorCode::ArityError);
  CHECK_ERROR_CODE(Expr::parse("legendre(1.5, z)")(Env{}), ErrorCode::InputInvalid);
}

TEST_CASE("domains and variables") {
  auto e = Expr::parse("exp(-r^2)*(1 + z^2) + t");
  CHECK(e.variables() == std::set<std::string>{"r", "t", "z"});
  CHECK_ERROR_CODE(e.require_domain({"r", "z"}, "profile"), ErrorCode::UnknownIdentifier);
  CHECK_NOTHROW(e.require_domain({"r", "z", "t"}, "profile"));
  CHECK(Expr::parse("ball(2) + gauss(1)").variables() == std::set<std::string>{"r"});
}

TEST_CASE("catalog references") {
  auto e = Expr::parse("catalog:gamma-q(4)");
  REQUIRE(e.catalog().has_value());
  CHECK(e.catalog()->name == "gamma-q");
  CHECK(e.catalog()->args == std::vector<double>{4.0});
  CHECK(Expr::parse("catalog:exp-ell()").catalog()->args.empty());
  CHECK_FALSE(Expr::parse("exp(-r)").catalog().has_value());
  CHECK_ERROR_CODE(Expr::parse("catalog:gauss-r2(r)"), ErrorCode::SyntaxError);
}

TEST_CASE("breakpoints") {
  auto bp = Expr::parse("ball(1) + 0.25*ball(2) + bump(3, 4)").breakpoints();
  for (double v : {1.0, 2.0, 3.0, 4.0}) CHECK(std::find(bp.begin(), bp.end(), v) != bp.end());
}

TEST_CASE("evenness check") {
  CHECK(check_even(Expr::parse("1 + x*y + z^2")) < 1e-14);
  CHECK_ERROR_CODE(check_even(Expr::parse("1 + 0.1*z")), ErrorCode::NotEven);
  CHECK_ERROR_CODE(check_even(Expr::parse("x^3 + y")), ErrorCode::NotEven);
}

TEST_CASE("pretty printing round-trips 200 random expressions") {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const std::string src = random_expr(rng, 4);
    const Expr a = Expr::parse(src);
    const Expr b = Expr::parse(a.pretty());
    CHECK_MESSAGE(a == b, std::string(src + "  ->  " + a.pretty()));
    CHECK(b.pretty() == a.pretty());
    for (int k = 0; k < 3; ++k) {
      Env env{u(rng), u(rng), u(rng), 1.0 + u(rng), 0.0};
      const double va = a(env);
      const double vb = b(env);
      if (std::isfinite(va)) CHECK(va == vb);
    }
  }
}
