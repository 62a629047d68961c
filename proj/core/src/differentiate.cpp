#include <unordered_map>

#include "mcir/expr.hpp"

namespace mcir {

namespace {

// Product that treats an exact zero factor as annihilating. Only used for
// derivative terms, where a structurally zero factor means "no dependence".
Expr dmul(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr(0.0);
  return a * b;
}

class Differentiator {
 public:
  explicit Differentiator(std::size_t variable) : variable_(static_cast<std::int32_t>(variable)) {}

  Expr operator()(const Expr& e) {
    const Node* key = e.ptr().get();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Expr d = rule(e);
    memo_.emplace(key, d);
    return d;
  }

 private:
  Expr rule(const Expr& e) {
    const Node& n = e.node();
    switch (n.op) {
      case Op::Const:
        return Expr(0.0);
      case Op::Var:
        return Expr(n.param == variable_ ? 1.0 : 0.0);
      case Op::Sign:
      case Op::Step:
        return Expr(0.0);
      default:
        break;
    }

    const Expr u(n.lhs);
    const Expr du = (*this)(u);
    if (arity(n.op) == 1 && du.is_constant(0.0)) return Expr(0.0);

    switch (n.op) {
      case Op::Neg:
        return -du;
      case Op::Pow: {
        const int k = n.param;
        if (k == 0) return Expr(0.0);
        return dmul(Expr(static_cast<double>(k)) * pow(u, k - 1), du);
      }
      case Op::Sin:
        return dmul(cos(u), du);
      case Op::Cos:
        return -dmul(sin(u), du);
      case Op::Exp:
        return dmul(e, du);
      case Op::Log:
        return du / u;
      case Op::Sqrt:
        return du / (Expr(2.0) * e);
      case Op::Abs:
        return dmul(sign(u), du);
      default:
        break;
    }

    const Expr v(n.rhs);
    const Expr dv = (*this)(v);
    const bool zu = du.is_constant(0.0);
    const bool zv = dv.is_constant(0.0);
    switch (n.op) {
      case Op::Add:
        if (zu) return dv;
        if (zv) return du;
        return du + dv;
      case Op::Sub:
        if (zu) return -dv;
        if (zv) return du;
        return du - dv;
      case Op::Mul: {
        const Expr left = dmul(du, v);
        const Expr right = dmul(u, dv);
        if (left.is_constant(0.0)) return right;
        if (right.is_constant(0.0)) return left;
        return left + right;
      }
      case Op::Div:
        // d(u/v) = (du - (u/v) dv) / v
        if (zu && zv) return Expr(0.0);
        if (zv) return du / v;
        if (zu) return -dmul(e, dv) / v;
        return (du - e * dv) / v;
      case Op::Max:
      case Op::Min: {
        if (zu && zv) return Expr(0.0);
        // First argument wins ties: max picks u when u >= v, min when u <= v.
        const Expr first = n.op == Op::Max ? step(u - v) : step(v - u);
        const Expr left = dmul(first, du);
        const Expr right = dmul(Expr(1.0) - first, dv);
        if (left.is_constant(0.0)) return right;
        if (right.is_constant(0.0)) return left;
        return left + right;
      }
      default:
        break;
    }
    throw std::logic_error("differentiate: unhandled operator");
  }

  std::int32_t variable_;
  std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr differentiate(const Expr& e, std::size_t variable) {
  return Differentiator(variable)(e);
}

GradientVector gradient(const Expression& f) {
  GradientVector g;
  g.has_kinks = contains_kinks(f.body());
  g.components.reserve(f.dims());
  for (std::size_t d = 0; d < f.dims(); ++d) g.components.push_back(differentiate(f.body(), d));
  return g;
}

HessianDiagonal hessian_diagonal(const Expression& f, const GradientVector& g) {
  HessianDiagonal h;
  h.has_kinks = g.has_kinks;
  h.components.reserve(f.dims());
  for (std::size_t d = 0; d < f.dims(); ++d) h.components.push_back(differentiate(g.components[d], d));
  return h;
}

HessianDiagonal hessian_diagonal(const Expression& f) { return hessian_diagonal(f, gradient(f)); }

}  // namespace mcir
