#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcir/box.hpp"
#include "mcir/expr.hpp"
#include "mcir/objective.hpp"

namespace mcir {

struct LocalOptOptions {
  std::size_t memory = 5;
  double armijo = 1e-4;
  int max_halvings = 30;
  double projected_gradient_tolerance = 1e-8;
  /// Stop once an accepted step improves f by less than this fraction of |f|.
  double min_relative_improvement = 1e-12;
};

struct LocalOptReport {
  std::vector<double> x;
  double y = 0.0;
  std::uint64_t evaluations = 0;
  bool converged = false;
};

/// Projected limited-memory quasi-Newton descent inside `box`.
///
/// Function and gradient queries count one evaluation each. The starting value
/// f(x0) is always computed, so at most `budget + 1` evaluations are used and
/// `budget == 0` returns (x0, f(x0)). The returned value never exceeds f(x0)
/// and every iterate stays inside `box`.
///
/// Throws std::invalid_argument if x0 is not inside `box`.
LocalOptReport local_opt(Objective& f, std::span<const double> x0, const BoxDomain& box,
                         std::uint64_t budget, const LocalOptOptions& options = {});

LocalOptReport local_opt(const Expression& f, std::span<const double> x0, const BoxDomain& box,
                         std::uint64_t budget, const LocalOptOptions& options = {});

}  // namespace mcir
