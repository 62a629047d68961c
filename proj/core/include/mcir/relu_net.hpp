#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mcir/expr.hpp"

namespace mcir {

/// Weights of a one-hidden-layer ReLU network
/// y = b2 + sum_j w2[j] * max(0, sum_i W1[j][i] * x[i] + b1[j]).
struct ReluNetWeights {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::vector<std::vector<double>> W1;  // hidden x inputs
  std::vector<double> b1;               // hidden
  std::vector<double> w2;               // hidden
  double b2 = 0.0;

  /// Throws std::invalid_argument on inconsistent shapes or non-finite entries.
  void validate() const;
};

/// Direct forward pass, same operation order as the translated expression.
double forward(const ReluNetWeights& w, std::span<const double> x);

Expression relu_net_to_expression(const ReluNetWeights& w);

/// JSON layout `{n, h, W1: [[..]], b1: [..], w2: [..], b2}`.
ReluNetWeights relu_net_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ReluNetWeights& w);

}  // namespace mcir
