#include "mcir/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "mcir/program.hpp"
#include "scalar_ops.hpp"

namespace mcir {

int arity(Op op) {
  switch (op) {
    case Op::Const:
    case Op::Var:
      return 0;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Max:
    case Op::Min:
      return 2;
    default:
      return 1;
  }
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Neg: return "neg";
    case Op::Pow: return "^";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    case Op::Max: return "max";
    case Op::Min: return "min";
    case Op::Sign: return "sign";
    case Op::Step: return "step";
  }
  return "?";
}

namespace {

NodePtr new_node(Op op, double value, std::int32_t param, NodePtr lhs, NodePtr rhs) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->value = value;
  node->param = param;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

Expr constant_or_node(Op op, const Expr& a, const Expr& b, int param) {
  const bool binary = arity(op) == 2;
  if (a.is_constant() && (!binary || b.is_constant())) {
    const double folded =
        detail::apply(op, a.node().value, binary ? b.node().value : 0.0, param);
    if (std::isfinite(folded)) return Expr(folded);
  }
  return Expr(new_node(op, 0.0, param, a.ptr(), binary ? b.ptr() : nullptr));
}

}  // namespace

Expr::Expr(double c) : node_(new_node(Op::Const, c, 0, nullptr, nullptr)) {}

Expr Expr::var(std::size_t index) {
  return Expr(new_node(Op::Var, 0.0, static_cast<std::int32_t>(index), nullptr, nullptr));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return b;
  return constant_or_node(Op::Add, a, b, 0);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return constant_or_node(Op::Sub, a, b, 0);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(1.0)) return b;
  return constant_or_node(Op::Mul, a, b, 0);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_constant(1.0)) return a;
  return constant_or_node(Op::Div, a, b, 0);
}

Expr operator-(const Expr& a) {
  if (a.op() == Op::Neg) return Expr(a.node().lhs);
  if (a.is_constant()) return Expr(-a.node().value);
  return constant_or_node(Op::Neg, a, Expr(), 0);
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 1) return base;
  return constant_or_node(Op::Pow, base, Expr(), exponent);
}

Expr sin(const Expr& a) { return constant_or_node(Op::Sin, a, Expr(), 0); }
Expr cos(const Expr& a) { return constant_or_node(Op::Cos, a, Expr(), 0); }
Expr exp(const Expr& a) { return constant_or_node(Op::Exp, a, Expr(), 0); }
Expr log(const Expr& a) { return constant_or_node(Op::Log, a, Expr(), 0); }
Expr sqrt(const Expr& a) { return constant_or_node(Op::Sqrt, a, Expr(), 0); }
Expr abs(const Expr& a) { return constant_or_node(Op::Abs, a, Expr(), 0); }
Expr max(const Expr& a, const Expr& b) { return constant_or_node(Op::Max, a, b, 0); }
Expr min(const Expr& a, const Expr& b) { return constant_or_node(Op::Min, a, b, 0); }
Expr sign(const Expr& a) { return constant_or_node(Op::Sign, a, Expr(), 0); }
Expr step(const Expr& a) { return constant_or_node(Op::Step, a, Expr(), 0); }

Expr make(Op op, const Expr& a, const Expr& b) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Neg: return -a;
    case Op::Sin: return sin(a);
    case Op::Cos: return cos(a);
    case Op::Exp: return exp(a);
    case Op::Log: return log(a);
    case Op::Sqrt: return sqrt(a);
    case Op::Abs: return abs(a);
    case Op::Max: return max(a, b);
    case Op::Min: return min(a, b);
    case Op::Sign: return sign(a);
    case Op::Step: return step(a);
    case Op::Const:
    case Op::Var:
    case Op::Pow:
      break;
  }
  throw std::invalid_argument("make: operator needs explicit parameters");
}

bool structurally_equal(const Expr& a, const Expr& b) {
  std::function<bool(const Node*, const Node*)> eq = [&](const Node* x, const Node* y) {
    if (x == y) return true;
    if (x->op != y->op || x->param != y->param) return false;
    if (x->op == Op::Const) {
      return std::memcmp(&x->value, &y->value, sizeof(double)) == 0;
    }
    const int n = arity(x->op);
    if (n >= 1 && !eq(x->lhs.get(), y->lhs.get())) return false;
    if (n == 2 && !eq(x->rhs.get(), y->rhs.get())) return false;
    return true;
  };
  return eq(a.ptr().get(), b.ptr().get());
}

namespace {

template <class Visit>
void for_each_node(const Expr& e, Visit&& visit) {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{e.ptr().get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    visit(*n);
    if (n->lhs) stack.push_back(n->lhs.get());
    if (n->rhs) stack.push_back(n->rhs.get());
  }
}

}  // namespace

std::size_t node_count(const Expr& e) {
  std::size_t count = 0;
  for_each_node(e, [&](const Node&) { ++count; });
  return count;
}

std::size_t required_dims(const Expr& e) {
  std::size_t dims = 0;
  for_each_node(e, [&](const Node& n) {
    if (n.op == Op::Var) dims = std::max(dims, static_cast<std::size_t>(n.param) + 1);
  });
  return dims;
}

bool contains_kinks(const Expr& e) {
  bool kinks = false;
  for_each_node(e, [&](const Node& n) {
    kinks = kinks || n.op == Op::Abs || n.op == Op::Max || n.op == Op::Min ||
            n.op == Op::Sign || n.op == Op::Step;
  });
  return kinks;
}

Expression::Expression(Expr body, std::size_t dims) : body_(std::move(body)), dims_(dims) {
  if (dims_ == 0) throw std::invalid_argument("expression dimension must be positive");
  for_each_node(body_, [&](const Node& n) {
    if (n.op == Op::Var && (n.param < 0 || static_cast<std::size_t>(n.param) >= dims_)) {
      throw std::invalid_argument("variable x" + std::to_string(n.param) +
                                  " out of range for dimension " + std::to_string(dims_));
    }
  });
}

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

double eval(const Expression& f, std::span<const double> x) {
  if (x.size() != f.dims()) {
    throw std::invalid_argument("eval: expected " + std::to_string(f.dims()) +
                                " coordinates, got " + std::to_string(x.size()));
  }
  std::vector<double> scratch;
  return Program::compile(f).evaluate(x, scratch);
}

}  // namespace mcir
