#include "mcir/problems.hpp"

#include <numbers>
#include <stdexcept>

namespace mcir {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dims(std::size_t n) {
  if (n == 0) throw std::invalid_argument("benchmark dimension must be positive");
}

}  // namespace

BenchmarkProblem make_ackley(std::size_t n) {
  require_dims(n);
  Expr squares = pow(Expr::var(0), 2);
  Expr cosines = cos(Expr(2.0 * kPi) * Expr::var(0));
  for (std::size_t i = 1; i < n; ++i) {
    squares = squares + pow(Expr::var(i), 2);
    cosines = cosines + cos(Expr(2.0 * kPi) * Expr::var(i));
  }
  const Expr inv_n(1.0 / static_cast<double>(n));
  Expr body = Expr(-20.0) * exp(Expr(-0.2) * sqrt(squares * inv_n)) - exp(cosines * inv_n) +
              Expr(20.0) + Expr(std::numbers::e);
  return {"ackley", Expression(body, n), BoxDomain::cube(n, -32.768, 32.768), 0.0,
          std::vector<double>(n, 0.0)};
}

BenchmarkProblem make_levy(std::size_t n) {
  require_dims(n);
  auto w = [](std::size_t i) { return Expr(1.0) + (Expr::var(i) - Expr(1.0)) * Expr(0.25); };
  Expr body = pow(sin(Expr(kPi) * w(0)), 2);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    body = body + pow(w(i) - Expr(1.0), 2) *
                      (Expr(1.0) + Expr(10.0) * pow(sin(Expr(kPi) * w(i) + Expr(1.0)), 2));
  }
  const Expr last = w(n - 1);
  body = body + pow(last - Expr(1.0), 2) * (Expr(1.0) + pow(sin(Expr(2.0 * kPi) * last), 2));
  return {"levy", Expression(body, n), BoxDomain::cube(n, -10.0, 10.0), 0.0,
          std::vector<double>(n, 1.0)};
}

BenchmarkProblem make_michalewicz(std::size_t n) {
  require_dims(n);
  Expr sum(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Expr x = Expr::var(i);
    const double scale = static_cast<double>(i + 1) / kPi;
    sum = sum + sin(x) * pow(sin(Expr(scale) * pow(x, 2)), 20);
  }
  return {"michalewicz", Expression(-sum, n), BoxDomain::cube(n, 0.0, kPi), std::nullopt,
          std::nullopt};
}

BenchmarkProblem make_problem(const std::string& name, std::size_t n) {
  if (name == "ackley") return make_ackley(n);
  if (name == "levy") return make_levy(n);
  if (name == "michalewicz") return make_michalewicz(n);
  throw std::invalid_argument("unknown benchmark function '" + name + "'");
}

std::vector<std::string> builtin_problem_names() { return {"ackley", "levy", "michalewicz"}; }

}  // namespace mcir
