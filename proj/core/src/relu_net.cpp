#include "mcir/relu_net.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace mcir {

void ReluNetWeights::validate() const {
  if (inputs == 0 || hidden == 0) throw std::invalid_argument("relu net: n and h must be positive");
  if (W1.size() != hidden || b1.size() != hidden || w2.size() != hidden) {
    throw std::invalid_argument("relu net: W1, b1 and w2 must have h = " +
                                std::to_string(hidden) + " rows");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  for (std::size_t j = 0; j < hidden; ++j) {
    if (W1[j].size() != inputs) {
      throw std::invalid_argument("relu net: W1 row " + std::to_string(j) + " must have n = " +
                                  std::to_string(inputs) + " entries");
    }
    for (double v : W1[j]) {
      if (!finite(v)) throw std::invalid_argument("relu net: non-finite weight in W1");
    }
    if (!finite(b1[j]) || !finite(w2[j])) throw std::invalid_argument("relu net: non-finite weight");
  }
  if (!finite(b2)) throw std::invalid_argument("relu net: non-finite b2");
}

double forward(const ReluNetWeights& w, std::span<const double> x) {
  if (x.size() != w.inputs) throw std::invalid_argument("relu net: input dimension mismatch");
  double y = w.b2;
  for (std::size_t j = 0; j < w.hidden; ++j) {
    double pre = w.W1[j][0] * x[0];
    for (std::size_t i = 1; i < w.inputs; ++i) pre = pre + w.W1[j][i] * x[i];
    pre = pre + w.b1[j];
    const double act = pre >= 0.0 ? pre : 0.0;
    y = y + w.w2[j] * act;
  }
  return y;
}

Expression relu_net_to_expression(const ReluNetWeights& w) {
  w.validate();
  // Same association order as forward(), so both give bit-identical values.
  Expr y(w.b2);
  for (std::size_t j = 0; j < w.hidden; ++j) {
    Expr pre = Expr(w.W1[j][0]) * Expr::var(0);
    for (std::size_t i = 1; i < w.inputs; ++i) pre = pre + Expr(w.W1[j][i]) * Expr::var(i);
    pre = pre + Expr(w.b1[j]);
    y = y + Expr(w.w2[j]) * max(Expr(0.0), pre);
  }
  return Expression(y, w.inputs);
}

ReluNetWeights relu_net_from_json(const nlohmann::json& j) {
  ReluNetWeights w;
  try {
    w.inputs = j.at("n").get<std::size_t>();
    w.hidden = j.at("h").get<std::size_t>();
    w.W1 = j.at("W1").get<std::vector<std::vector<double>>>();
    w.b1 = j.at("b1").get<std::vector<double>>();
    w.w2 = j.at("w2").get<std::vector<double>>();
    w.b2 = j.at("b2").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("relu net weights: ") + e.what());
  }
  w.validate();
  return w;
}

nlohmann::json to_json(const ReluNetWeights& w) {
  return {{"n", w.inputs}, {"h", w.hidden}, {"W1", w.W1},
          {"b1", w.b1},    {"w2", w.w2},    {"b2", w.b2}};
}

}  // namespace mcir
