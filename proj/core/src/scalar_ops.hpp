#pragma once

#include <cmath>
#include <limits>

#include "mcir/expr.hpp"

namespace mcir::detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double int_pow(double base, int exponent) {
  if (exponent < 0 && base == 0.0) return kNaN;
  return std::pow(base, exponent);
}

/// Point semantics of every node kind. Undefined results are NaN.
inline double apply(Op op, double a, double b, int param) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return b == 0.0 ? kNaN : a / b;
    case Op::Neg: return -a;
    case Op::Pow: return int_pow(a, param);
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    case Op::Exp: return std::exp(a);
    case Op::Log: return a > 0.0 ? std::log(a) : kNaN;
    case Op::Sqrt: return a >= 0.0 ? std::sqrt(a) : kNaN;
    case Op::Abs: return std::fabs(a);
    case Op::Max:
      if (std::isnan(a) || std::isnan(b)) return kNaN;
      return a >= b ? a : b;
    case Op::Min:
      if (std::isnan(a) || std::isnan(b)) return kNaN;
      return a <= b ? a : b;
    case Op::Sign:
      if (std::isnan(a)) return kNaN;
      return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
    case Op::Step:
      if (std::isnan(a)) return kNaN;
      return a >= 0.0 ? 1.0 : 0.0;
    case Op::Const:
    case Op::Var:
      break;
  }
  return kNaN;
}

}  // namespace mcir::detail
