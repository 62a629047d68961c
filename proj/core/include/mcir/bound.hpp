#pragma once

#include <vector>

#include "mcir/box.hpp"
#include "mcir/expr.hpp"
#include "mcir/interval.hpp"
#include "mcir/program.hpp"

namespace mcir {

/// Lower bounds are clamped into [-kBoundClamp, kBoundClamp].
inline constexpr double kBoundClamp = 1e12;

/// Natural interval extension of f over `box`: every defined value f(x) with
/// x in box lies in the result.
Interval eval_interval(const Expression& f, const BoxDomain& box);

/// Interval evaluation of the first output of a compiled program.
Interval eval_interval(const Program& program, const BoxDomain& box,
                       std::vector<Interval>& scratch);

/// eval_interval(f, box).lo clamped to [-1e12, 1e12].
double lower_bound(const Expression& f, const BoxDomain& box);

inline double clamp_bound(double lb) {
  return lb < -kBoundClamp ? -kBoundClamp : (lb > kBoundClamp ? kBoundClamp : lb);
}

}  // namespace mcir
