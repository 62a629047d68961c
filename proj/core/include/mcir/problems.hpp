#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcir/box.hpp"
#include "mcir/expr.hpp"

namespace mcir {

struct BenchmarkProblem {
  std::string name;
  Expression function;
  BoxDomain domain;
  std::optional<double> known_value;
  std::optional<std::vector<double>> known_point;

  std::size_t dims() const { return function.dims(); }
};

/// -20 exp(-0.2 sqrt(sum x^2 / n)) - exp(sum cos(2 pi x) / n) + 20 + e
/// on [-32.768, 32.768]^n; minimum 0 at the origin.
BenchmarkProblem make_ackley(std::size_t n);

/// Levy function with w_i = 1 + (x_i - 1) / 4 on [-10, 10]^n;
/// minimum 0 at (1, ..., 1).
BenchmarkProblem make_levy(std::size_t n);

/// -sum sin(x_i) sin(i x_i^2 / pi)^20 on [0, pi]^n. No closed-form minimum.
BenchmarkProblem make_michalewicz(std::size_t n);

/// Looks up "ackley", "levy" or "michalewicz"; throws std::invalid_argument
/// for anything else.
BenchmarkProblem make_problem(const std::string& name, std::size_t n);

std::vector<std::string> builtin_problem_names();

}  // namespace mcir
