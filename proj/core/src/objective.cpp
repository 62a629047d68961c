#include "mcir/objective.hpp"

#include <stdexcept>

#include "mcir/bound.hpp"

namespace mcir {

Objective::Objective(Expression f) : f_(std::move(f)) {
  const GradientVector g = mcir::gradient(f_);
  const HessianDiagonal h = mcir::hessian_diagonal(f_, g);
  kinks_ = g.has_kinks;
  value_ = Program::compile(f_);
  gradient_ = Program::compile(g.components, f_.dims());
  hessian_ = Program::compile(h.components, f_.dims());
}

double Objective::value(std::span<const double> x) {
  ++evaluations_;
  return value_.evaluate(x, scratch_);
}

void Objective::gradient(std::span<const double> x, std::span<double> g) {
  if (g.size() != dims()) throw std::invalid_argument("Objective::gradient: output size mismatch");
  ++evaluations_;
  gradient_.evaluate(x, g, scratch_);
}

void Objective::hessian_diagonal(std::span<const double> x, std::span<double> h) {
  if (h.size() != dims()) throw std::invalid_argument("Objective::hessian_diagonal: output size mismatch");
  ++evaluations_;
  hessian_.evaluate(x, h, scratch_);
}

Interval Objective::bound(const BoxDomain& box) {
  return eval_interval(value_, box, interval_scratch_);
}

double Objective::lower_bound(const BoxDomain& box) { return clamp_bound(bound(box).lo); }

}  // namespace mcir
