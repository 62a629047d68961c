#include "mcir/program.hpp"

#include <bit>
#include <stdexcept>
#include <unordered_map>

#include "scalar_ops.hpp"

namespace mcir {

namespace {

struct InstrKey {
  Op op;
  std::int32_t param;
  std::uint32_t a;
  std::uint32_t b;
  std::uint64_t value_bits;

  bool operator==(const InstrKey&) const = default;
};

struct InstrKeyHash {
  std::size_t operator()(const InstrKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.op) * 0x9E3779B97F4A7C15ULL;
    auto mix = [&h](std::uint64_t v) {
      h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    };
    mix(static_cast<std::uint32_t>(k.param));
    mix(k.a);
    mix(k.b);
    mix(k.value_bits);
    return static_cast<std::size_t>(h);
  }
};

class Compiler {
 public:
  explicit Compiler(std::vector<Program::Instr>& code) : code_(code) {}

  std::uint32_t emit(const Node* root) {
    // Iterative post-order so deep expressions do not exhaust the stack.
    std::vector<std::pair<const Node*, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [node, expanded] = stack.back();
      stack.pop_back();
      if (slots_.contains(node)) continue;
      if (!expanded) {
        stack.emplace_back(node, true);
        if (node->rhs) stack.emplace_back(node->rhs.get(), false);
        if (node->lhs) stack.emplace_back(node->lhs.get(), false);
        continue;
      }
      const std::uint32_t a = node->lhs ? slots_.at(node->lhs.get()) : 0;
      const std::uint32_t b = node->rhs ? slots_.at(node->rhs.get()) : 0;
      const InstrKey key{node->op, node->param, a, b,
                         node->op == Op::Const ? std::bit_cast<std::uint64_t>(node->value) : 0};
      auto [it, inserted] = unique_.try_emplace(key, static_cast<std::uint32_t>(code_.size()));
      if (inserted) {
        code_.push_back({node->op, node->param, a, b, node->op == Op::Const ? node->value : 0.0});
      }
      slots_.emplace(node, it->second);
    }
    return slots_.at(root);
  }

 private:
  std::vector<Program::Instr>& code_;
  std::unordered_map<const Node*, std::uint32_t> slots_;
  std::unordered_map<InstrKey, std::uint32_t, InstrKeyHash> unique_;
};

}  // namespace

Program Program::compile(std::span<const Expr> outputs, std::size_t dims) {
  Program p;
  p.dims_ = dims;
  Compiler compiler(p.code_);
  p.outputs_.reserve(outputs.size());
  for (const Expr& e : outputs) {
    if (required_dims(e) > dims) throw std::invalid_argument("Program: variable index exceeds dims");
    p.outputs_.push_back(compiler.emit(e.ptr().get()));
  }
  return p;
}

Program Program::compile(const Expression& f) {
  return compile(std::span<const Expr>(&f.body(), 1), f.dims());
}

void Program::evaluate(std::span<const double> x, std::span<double> out,
                       std::vector<double>& scratch) const {
  if (x.size() != dims_) throw std::invalid_argument("Program::evaluate: dimension mismatch");
  scratch.resize(code_.size());
  double* r = scratch.data();
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& in = code_[i];
    switch (in.op) {
      case Op::Const: r[i] = in.value; break;
      case Op::Var: r[i] = x[static_cast<std::size_t>(in.param)]; break;
      case Op::Add: r[i] = r[in.a] + r[in.b]; break;
      case Op::Sub: r[i] = r[in.a] - r[in.b]; break;
      case Op::Mul: r[i] = r[in.a] * r[in.b]; break;
      case Op::Neg: r[i] = -r[in.a]; break;
      default: r[i] = detail::apply(in.op, r[in.a], r[in.b], in.param); break;
    }
  }
  for (std::size_t k = 0; k < outputs_.size() && k < out.size(); ++k) out[k] = r[outputs_[k]];
}

double Program::evaluate(std::span<const double> x, std::vector<double>& scratch) const {
  double out = 0.0;
  evaluate(x, std::span<double>(&out, 1), scratch);
  return out;
}

}  // namespace mcir
