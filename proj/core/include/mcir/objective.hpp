#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcir/box.hpp"
#include "mcir/expr.hpp"
#include "mcir/interval.hpp"
#include "mcir/program.hpp"

namespace mcir {

/// An expression compiled for repeated point, derivative and interval
/// queries, with a running count of point queries.
///
/// Holds scratch buffers, so one instance must not be used from two threads
/// at once. The underlying Expression can be shared freely.
class Objective {
 public:
  explicit Objective(Expression f);

  const Expression& expression() const { return f_; }
  std::size_t dims() const { return f_.dims(); }
  bool has_kinks() const { return kinks_; }

  /// Each of these counts as one evaluation.
  double value(std::span<const double> x);
  void gradient(std::span<const double> x, std::span<double> g);
  void hessian_diagonal(std::span<const double> x, std::span<double> h);

  /// Interval queries are not counted.
  Interval bound(const BoxDomain& box);
  double lower_bound(const BoxDomain& box);

  std::uint64_t evaluations() const { return evaluations_; }

 private:
  Expression f_;
  Program value_;
  Program gradient_;
  Program hessian_;
  bool kinks_ = false;
  std::uint64_t evaluations_ = 0;
  std::vector<double> scratch_;
  std::vector<Interval> interval_scratch_;
};

}  // namespace mcir
