#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcir/expr.hpp"

namespace mcir {

/// A straight-line tape compiled from one or more expressions.
///
/// Identical subexpressions are merged while compiling (hash-consing), so a
/// gradient whose components share most of their structure costs little more
/// to evaluate than a single component.
class Program {
 public:
  struct Instr {
    Op op;
    std::int32_t param;
    std::uint32_t a;
    std::uint32_t b;
    double value;
  };

  Program() = default;

  static Program compile(std::span<const Expr> outputs, std::size_t dims);
  static Program compile(const Expression& f);

  std::size_t dims() const { return dims_; }
  std::size_t num_outputs() const { return outputs_.size(); }
  std::size_t size() const { return code_.size(); }
  std::span<const Instr> code() const { return code_; }
  std::span<const std::uint32_t> outputs() const { return outputs_; }

  /// Writes every output into `out`. `scratch` is resized as needed.
  void evaluate(std::span<const double> x, std::span<double> out,
                std::vector<double>& scratch) const;

  /// Single-output convenience.
  double evaluate(std::span<const double> x, std::vector<double>& scratch) const;

 private:
  std::vector<Instr> code_;
  std::vector<std::uint32_t> outputs_;
  std::size_t dims_ = 0;
};

}  // namespace mcir
