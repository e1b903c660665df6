#pragma once

// Function-specification mini-language.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' args ')' | '(' expr ')'
//            | 'catalog' ':' entry '(' args ')'
//
// Variables x, y, z (a point of the sphere), r (radius), t (line offset) and
// the constant pi. Functions: exp, erf, abs, sqrt, min, max, legendre(k, u),
// gauss(w) = exp(-r^2/w^2), bump(a, b) (smooth, supported on a < r < b),
// ball(R) (mollified indicator of the radius-R ball).

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "radoncomp/common.hpp"

namespace radoncomp {

enum class NodeKind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call, Catalog };

struct ExprNode {
  NodeKind kind = NodeKind::Number;
  double value = 0.0;
  std::string name;
  std::vector<std::shared_ptr<const ExprNode>> args;
  int line = 1;
  int col = 1;
};

struct Env {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double r = 0.0;
  double t = 0.0;
};

struct CatalogRef {
  std::string name;
  std::vector<double> args;
};

class Expr {
 public:
  /// SyntaxError, UnknownIdentifier or ArityError with line:col.
  static Expr parse(const std::string& src);

  double operator()(const Env& env) const;
  double radial(double r) const;
  double angular(const Vec3& u) const;

  /// Variables the expression reads; gauss, bump and ball read r.
  std::set<std::string> variables() const;
  /// Throws UnknownIdentifier (with position) for variables outside allowed.
  void require_domain(const std::set<std::string>& allowed, const std::string& what) const;

  /// Set when the whole expression is a single catalog reference.
  std::optional<CatalogRef> catalog() const;
  /// Radii where the expression changes steeply (ball and bump edges).
  std::vector<double> breakpoints() const;

  std::string pretty() const;
  bool operator==(const Expr& o) const;

  const ExprNode& root() const { return *root_; }

 private:
  std::shared_ptr<const ExprNode> root_;
};

/// Antipodal comparison at 64 fixed-seed points: max |f(u) - f(-u)| relative
/// to max(1, |f|). NotEven when it exceeds tol.
double check_even(const Expr& e, double tol = 1e-10);

}  // namespace radoncomp
