#include "radoncomp/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>

#include "radoncomp/catalog.hpp"
#include "radoncomp/quadrature.hpp"

namespace radoncomp {

namespace {

enum class Tok { Number, Ident, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double value = 0.0;
  int line = 1;
  int col = 1;
};

std::string where(int line, int col) { return std::to_string(line) + ":" + std::to_string(col); }

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    Token tk;
    tk.line = line;
    tk.col = col;
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.')) ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      tk.kind = Tok::Number;
      tk.text = src.substr(start, i - start);
      char* end = nullptr;
      tk.value = std::strtod(tk.text.c_str(), &end);
      if (end != tk.text.c_str() + tk.text.size()) {
        throw Error(ErrorCode::SyntaxError, "malformed number '" + tk.text + "' at " + where(line, col));
      }
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      tk.kind = Tok::Ident;
      tk.text = src.substr(start, i - start);
    } else if (std::string("+-*/^(),:").find(c) != std::string::npos) {
      tk.kind = Tok::Op;
      tk.text = std::string(1, c);
      ++i;
    } else {
      throw Error(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "' at " + where(line, col));
    }
    col += static_cast<int>(i - start);
    out.push_back(tk);
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const std::map<std::string, int>& arities() {
  static const std::map<std::string, int> a{{"exp", 1},  {"erf", 1},   {"abs", 1},   {"sqrt", 1},
                                            {"min", 2},  {"max", 2},   {"legendre", 2}, {"gauss", 1},
                                            {"bump", 2}, {"ball", 1}};
  return a;
}

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(NodeKind k, const Token& at, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->line = at.line;
  n->col = at.col;
  n->args = std::move(args);
  return n;
}

double eval(const ExprNode& n, const Env& env);
void collect_vars(const ExprNode& n, std::set<std::string>& out);

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  NodePtr run() {
    NodePtr e = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'", peek());
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  bool is_op(const char* s) const { return peek().kind == Tok::Op && peek().text == s; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    // running out of input is reported at the last token read
    if (at.kind == Tok::End && pos_ > 0) {
      const Token& last = toks_[pos_ - 1];
      throw Error(ErrorCode::SyntaxError, "unexpected end of input after '" + last.text + "' at " + where(last.line, last.col));
    }
    throw Error(ErrorCode::SyntaxError, msg + " at " + where(at.line, at.col));
  }

  void expect(const char* s) {
    if (!is_op(s)) fail(std::string("expected '") + s + "'", peek());
    take();
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (is_op("+") || is_op("-")) {
      const Token& op = take();
      lhs = make(op.text == "+" ? NodeKind::Add : NodeKind::Sub, op, {lhs, term()});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (is_op("*") || is_op("/")) {
      const Token& op = take();
      lhs = make(op.text == "*" ? NodeKind::Mul : NodeKind::Div, op, {lhs, unary()});
    }
    return lhs;
  }

  NodePtr unary() {
    if (is_op("-")) {
      const Token& op = take();
      return make(NodeKind::Neg, op, {unary()});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (is_op("^")) {
      const Token& op = take();
      return make(NodeKind::Pow, op, {base, unary()});
    }
    return base;
  }

  std::vector<NodePtr> arguments() {
    expect("(");
    std::vector<NodePtr> args;
    if (is_op(")")) {
      take();
      return args;
    }
    args.push_back(expr());
    while (is_op(",")) {
      take();
      args.push_back(expr());
    }
    expect(")");
    return args;
  }

  NodePtr primary() {
    const Token& tk = peek();
    if (tk.kind == Tok::Number) {
      take();
      auto n = std::const_pointer_cast<ExprNode>(make(NodeKind::Number, tk));
      n->value = tk.value;
      return n;
    }
    if (is_op("(")) {
      take();
      NodePtr e = expr();
      expect(")");
      return e;
    }
    if (tk.kind != Tok::Ident) fail(tk.kind == Tok::End ? "unexpected end of input" : "unexpected '" + tk.text + "'", tk);
    take();
    if (tk.text == "catalog") return catalog(tk);
    if (is_op("(")) {
      auto it = arities().find(tk.text);
      if (it == arities().end()) throw Error(ErrorCode::UnknownIdentifier, "unknown function '" + tk.text + "' at " + where(tk.line, tk.col));
      std::vector<NodePtr> args = arguments();
      if (static_cast<int>(args.size()) != it->second) {
        throw Error(ErrorCode::ArityError, tk.text + " takes " + std::to_string(it->second) + " argument(s), got " +
                                               std::to_string(args.size()) + " at " + where(tk.line, tk.col));
      }
      auto n = std::const_pointer_cast<ExprNode>(make(NodeKind::Call, tk, std::move(args)));
      n->name = tk.text;
      return n;
    }
    if (tk.text == "pi" || tk.text == "x" || tk.text == "y" || tk.text == "z" || tk.text == "r" || tk.text == "t") {
      auto n = std::const_pointer_cast<ExprNode>(make(NodeKind::Variable, tk));
      n->name = tk.text;
      return n;
    }
    if (arities().count(tk.text)) {
      throw Error(ErrorCode::ArityError, tk.text + " needs an argument list at " + where(tk.line, tk.col));
    }
    throw Error(ErrorCode::UnknownIdentifier, "unknown identifier '" + tk.text + "' at " + where(tk.line, tk.col));
  }

  // catalog:gauss-r2(1)  -- entry names may contain '-'
  NodePtr catalog(const Token& at) {
    expect(":");
    std::string name;
    if (peek().kind == Tok::Ident) {
      name = take().text;
      while (is_op("-") && toks_[pos_ + 1].kind == Tok::Ident) {
        take();
        name += "-" + take().text;
      }
    }
    if (name.empty()) fail("expected a catalog entry name", peek());
    bool known = false;
    for (const auto& n : catalog_names()) known = known || n == name;
    if (!known) throw Error(ErrorCode::UnknownIdentifier, "unknown catalog entry '" + name + "' at " + where(at.line, at.col));
    std::vector<NodePtr> args = is_op("(") ? arguments() : std::vector<NodePtr>{};
    for (const auto& a : args) {
      std::set<std::string> vars;
      collect_vars(*a, vars);
      if (!vars.empty()) throw Error(ErrorCode::SyntaxError, "catalog arguments must be constants at " + where(a->line, a->col));
    }
    auto n = std::const_pointer_cast<ExprNode>(make(NodeKind::Catalog, at, std::move(args)));
    n->name = name;
    return n;
  }
};

double bump_on(double r, double a, double b) {
  if (!(r > a && r < b)) return 0.0;
  const double u = (2.0 * r - a - b) / (b - a);
  return std::exp(-1.0 / (1.0 - u * u));
}

double eval(const ExprNode& n, const Env& env) {
  auto arg = [&](std::size_t i) { return eval(*n.args[i], env); };
  switch (n.kind) {
    case NodeKind::Number: return n.value;
    case NodeKind::Variable:
      if (n.name == "x") return env.x;
      if (n.name == "y") return env.y;
      if (n.name == "z") return env.z;
      if (n.name == "r") return env.r;
      if (n.name == "t") return env.t;
      return kPi;
    case NodeKind::Neg: return -arg(0);
    case NodeKind::Add: return arg(0) + arg(1);
    case NodeKind::Sub: return arg(0) - arg(1);
    case NodeKind::Mul: return arg(0) * arg(1);
    case NodeKind::Div: return arg(0) / arg(1);
    case NodeKind::Pow: return std::pow(arg(0), arg(1));
    case NodeKind::Catalog:
      throw Error(ErrorCode::InputInvalid, "catalog entries are not pointwise expressions (" + n.name + ")");
    case NodeKind::Call: break;
  }
  const std::string& f = n.name;
  if (f == "exp") return std::exp(arg(0));
  if (f == "erf") return std::erf(arg(0));
  if (f == "abs") return std::abs(arg(0));
  if (f == "sqrt") return std::sqrt(arg(0));
  if (f == "min") return std::min(arg(0), arg(1));
  if (f == "max") return std::max(arg(0), arg(1));
  if (f == "legendre") {
    const double k = arg(0);
    if (k < 0.0 || k != std::floor(k)) throw Error(ErrorCode::InputInvalid, "legendre degree must be a non-negative integer");
    return legendre(static_cast<int>(k), arg(1));
  }
  if (f == "gauss") {
    const double w = arg(0);
    return std::exp(-env.r * env.r / (w * w));
  }
  if (f == "bump") return bump_on(env.r, arg(0), arg(1));
  if (f == "ball") return mollified_ball_profile(env.r, arg(0), 1e-2);
  throw Error(ErrorCode::UnknownIdentifier, "unknown function '" + f + "'");
}

void collect_vars(const ExprNode& n, std::set<std::string>& out) {
  if (n.kind == NodeKind::Variable && n.name != "pi") out.insert(n.name);
  if (n.kind == NodeKind::Call && (n.name == "gauss" || n.name == "bump" || n.name == "ball")) out.insert("r");
  for (const auto& a : n.args) collect_vars(*a, out);
}

const ExprNode* find_var(const ExprNode& n, const std::set<std::string>& allowed) {
  if (n.kind == NodeKind::Variable && n.name != "pi" && !allowed.count(n.name)) return &n;
  if (n.kind == NodeKind::Call && (n.name == "gauss" || n.name == "bump" || n.name == "ball") && !allowed.count("r")) {
    return &n;
  }
  for (const auto& a : n.args) {
    if (const ExprNode* hit = find_var(*a, allowed)) return hit;
  }
  return nullptr;
}

void collect_breaks(const ExprNode& n, std::vector<double>& out) {
  if (n.kind == NodeKind::Call && (n.name == "ball" || n.name == "bump")) {
    for (const auto& a : n.args) {
      std::set<std::string> v;
      collect_vars(*a, v);
      if (v.empty()) out.push_back(eval(*a, Env{}));
    }
  }
  for (const auto& a : n.args) collect_breaks(*a, out);
}

int prec(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    default: return 5;
  }
}

std::string fmt_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print(const ExprNode& n) {
  auto wrap = [](const ExprNode& c, int need) {
    const std::string s = print(c);
    return prec(c) < need ? "(" + s + ")" : s;
  };
  auto join_args = [&](const ExprNode& m) {
    std::string s;
    for (std::size_t i = 0; i < m.args.size(); ++i) s += (i ? ", " : "") + print(*m.args[i]);
    return s;
  };
  switch (n.kind) {
    case NodeKind::Number: return fmt_number(n.value);
    case NodeKind::Variable: return n.name;
    case NodeKind::Neg: return "-" + wrap(*n.args[0], 3);
    case NodeKind::Add: return wrap(*n.args[0], 1) + " + " + wrap(*n.args[1], 2);
    case NodeKind::Sub: return wrap(*n.args[0], 1) + " - " + wrap(*n.args[1], 2);
    case NodeKind::Mul: return wrap(*n.args[0], 2) + "*" + wrap(*n.args[1], 3);
    case NodeKind::Div: return wrap(*n.args[0], 2) + "/" + wrap(*n.args[1], 3);
    case NodeKind::Pow: return wrap(*n.args[0], 5) + "^" + wrap(*n.args[1], 3);
    case NodeKind::Call: return n.name + "(" + join_args(n) + ")";
    case NodeKind::Catalog: return "catalog:" + n.name + (n.args.empty() ? "" : "(" + join_args(n) + ")");
  }
  return "?";
}

bool same(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) return false;
  if (a.kind == NodeKind::Number && a.value != b.value) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

}  // namespace

Expr Expr::parse(const std::string& src) {
  Expr e;
  e.root_ = Parser(tokenize(src)).run();
  return e;
}

double Expr::operator()(const Env& env) const { return eval(*root_, env); }

double Expr::radial(double r) const {
  Env env;
  env.r = r;
  return eval(*root_, env);
}

double Expr::angular(const Vec3& u) const {
  Env env;
  env.x = u.x;
  env.y = u.y;
  env.z = u.z;
  env.r = 1.0;
  return eval(*root_, env);
}

std::set<std::string> Expr::variables() const {
  std::set<std::string> out;
  collect_vars(*root_, out);
  return out;
}

void Expr::require_domain(const std::set<std::string>& allowed, const std::string& what) const {
  if (const ExprNode* n = find_var(*root_, allowed)) {
    throw Error(ErrorCode::UnknownIdentifier, "'" + n->name + "' is not available in " + what + " at " +
                                                  where(n->line, n->col));
  }
}

std::optional<CatalogRef> Expr::catalog() const {
  if (root_->kind != NodeKind::Catalog) return std::nullopt;
  CatalogRef c;
  c.name = root_->name;
  for (const auto& a : root_->args) c.args.push_back(eval(*a, Env{}));
  return c;
}

std::vector<double> Expr::breakpoints() const {
  std::vector<double> out;
  collect_breaks(*root_, out);
  return out;
}

std::string Expr::pretty() const { return print(*root_); }

bool Expr::operator==(const Expr& o) const { return same(*root_, *o.root_); }

double check_even(const Expr& e, double tol) {
  std::mt19937_64 rng(20240917);
  std::normal_distribution<double> nd(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    const Vec3 u = normalized(Vec3{nd(rng), nd(rng), nd(rng)});
    const double a = e.angular(u);
    const double b = e.angular(u * -1.0);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  if (worst > tol) {
    throw Error(ErrorCode::NotEven, "expression '" + e.pretty() + "' is not even (antipodal defect " +
                                        std::to_string(worst) + ")");
  }
  return worst;
}

}  // namespace radoncomp
