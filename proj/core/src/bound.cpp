#include "mcir/bound.hpp"

#include <stdexcept>

namespace mcir {

Interval eval_interval(const Program& program, const BoxDomain& box,
                       std::vector<Interval>& scratch) {
  if (box.dims() != program.dims()) throw std::invalid_argument("eval_interval: dimension mismatch");
  const auto code = program.code();
  scratch.resize(code.size());
  Interval* r = scratch.data();
  for (std::size_t i = 0; i < code.size(); ++i) {
    const Program::Instr& in = code[i];
    switch (in.op) {
      case Op::Const: r[i] = Interval::point(in.value); break;
      case Op::Var: r[i] = box[static_cast<std::size_t>(in.param)]; break;
      case Op::Add: r[i] = r[in.a] + r[in.b]; break;
      case Op::Sub: r[i] = r[in.a] - r[in.b]; break;
      case Op::Mul: r[i] = r[in.a] * r[in.b]; break;
      case Op::Div: r[i] = r[in.a] / r[in.b]; break;
      case Op::Neg: r[i] = -r[in.a]; break;
      case Op::Pow: r[i] = pow(r[in.a], in.param); break;
      case Op::Sin: r[i] = sin(r[in.a]); break;
      case Op::Cos: r[i] = cos(r[in.a]); break;
      case Op::Exp: r[i] = exp(r[in.a]); break;
      case Op::Log: r[i] = log(r[in.a]); break;
      case Op::Sqrt: r[i] = sqrt(r[in.a]); break;
      case Op::Abs: r[i] = abs(r[in.a]); break;
      case Op::Max: r[i] = max(r[in.a], r[in.b]); break;
      case Op::Min: r[i] = min(r[in.a], r[in.b]); break;
      case Op::Sign: r[i] = sign(r[in.a]); break;
      case Op::Step: r[i] = step(r[in.a]); break;
    }
  }
  return r[program.outputs().front()];
}

Interval eval_interval(const Expression& f, const BoxDomain& box) {
  if (box.dims() != f.dims()) throw std::invalid_argument("eval_interval: dimension mismatch");
  std::vector<Interval> scratch;
  return eval_interval(Program::compile(f), box, scratch);
}

double lower_bound(const Expression& f, const BoxDomain& box) {
  return clamp_bound(eval_interval(f, box).lo);
}

}  // namespace mcir
