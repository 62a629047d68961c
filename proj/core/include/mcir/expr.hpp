#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcir {

/// Node kinds of an analytic expression.
///
/// `Sign` and `Step` never come out of user-written formulas directly; they
/// are produced by differentiating `abs`, `max` and `min`. `Step(u)` is 1 for
/// u >= 0 and 0 otherwise, `Sign(0)` is 0.
enum class Op : std::uint8_t {
  Const,
  Var,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Pow,
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
  Abs,
  Max,
  Min,
  Sign,
  Step,
};

int arity(Op op);
std::string_view op_name(Op op);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// One immutable node of an expression DAG. Subtrees may be shared.
struct Node {
  Op op = Op::Const;
  double value = 0.0;      // Const
  std::int32_t param = 0;  // Var index or Pow exponent
  NodePtr lhs;
  NodePtr rhs;
};

/// Lightweight handle used to build expressions with ordinary operators.
///
/// Construction performs constant folding and a few identities that never
/// change the value of a defined expression (x+0, x*1, x^1, -(-x)).
class Expr {
 public:
  Expr() : Expr(0.0) {}
  Expr(double c);  // NOLINT(google-explicit-constructor)
  explicit Expr(NodePtr node) : node_(std::move(node)) {}

  static Expr var(std::size_t index);

  const Node& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }
  Op op() const { return node_->op; }

  bool is_constant() const { return node_->op == Op::Const; }
  bool is_constant(double c) const { return is_constant() && node_->value == c; }

 private:
  NodePtr node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);
Expr abs(const Expr& a);
Expr max(const Expr& a, const Expr& b);
Expr min(const Expr& a, const Expr& b);
Expr sign(const Expr& a);
Expr step(const Expr& a);

/// Generic node builder; folds constants like the operator overloads.
Expr make(Op op, const Expr& a, const Expr& b = Expr());

/// Structural equality (same kinds, constants bit-equal, same shape).
bool structurally_equal(const Expr& a, const Expr& b);

/// Number of distinct nodes reachable from the root.
std::size_t node_count(const Expr& e);

/// Largest variable index used plus one (0 for a constant expression).
std::size_t required_dims(const Expr& e);

bool contains_kinks(const Expr& e);

/// An analytic function of `dims` variables x0 .. x{dims-1}.
class Expression {
 public:
  /// Throws std::invalid_argument if a variable index is >= dims or dims == 0.
  Expression(Expr body, std::size_t dims);

  const Expr& body() const { return body_; }
  std::size_t dims() const { return dims_; }

 private:
  Expr body_;
  std::size_t dims_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses `text` with variables x0 .. x{dims-1}. Lines and columns in errors
/// are 1-based; `first_line` shifts reported line numbers for embedded text.
Expression parse(std::string_view text, std::size_t dims, int first_line = 1);

/// Renders an expression in the grammar accepted by parse().
std::string unparse(const Expr& e);
inline std::string unparse(const Expression& f) { return unparse(f.body()); }

/// Evaluates f at x. Undefined operations (log of a non-positive value,
/// division by zero, sqrt of a negative value) give NaN.
///
/// Compiles f on every call; hold an Objective or Program for repeated use.
double eval(const Expression& f, std::span<const double> x);

/// Symbolic partial derivatives. `has_kinks` is set when the expression
/// contains abs/max/min, where the one-sided convention applies:
/// d|u|/du = 0 at u = 0 and max/min follow their first argument on ties.
struct GradientVector {
  std::vector<Expr> components;
  bool has_kinks = false;

  std::size_t size() const { return components.size(); }
};

struct HessianDiagonal {
  std::vector<Expr> components;
  bool has_kinks = false;

  std::size_t size() const { return components.size(); }
};

Expr differentiate(const Expr& e, std::size_t variable);
GradientVector gradient(const Expression& f);
HessianDiagonal hessian_diagonal(const Expression& f);
/// Same as hessian_diagonal(f) but reuses an already computed gradient.
HessianDiagonal hessian_diagonal(const Expression& f, const GradientVector& g);

}  // namespace mcir
