#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mcir/expr.hpp"
#include "mcir/objective.hpp"
#include "mcir/problems.hpp"
#include "mcir/program.hpp"
#include "mcir/relu_net.hpp"
#include "oracles.hpp"

using namespace mcir;
using mcir::oracle::central_first;
using mcir::oracle::central_second;

namespace {

const Expr x0 = Expr::var(0);
const Expr x1 = Expr::var(1);

double at(const Expression& f, std::vector<double> x) { return eval(f, x); }

oracle::ScalarFn as_fn(const Expression& f) {
  auto program = std::make_shared<Program>(Program::compile(f));
  auto scratch = std::make_shared<std::vector<double>>();
  return [program, scratch](std::span<const double> x) { return program->evaluate(x, *scratch); };
}

}  // namespace

TEST(Parse, MapsGrammarToTree) {
  const Expression f = parse("x0^2 + sin(x1)", 2);
  EXPECT_TRUE(structurally_equal(f.body(), pow(x0, 2) + sin(x1)));
  EXPECT_EQ(f.dims(), 2u);
}

TEST(Parse, DivisionByZeroIsNotAParseError) {
  const Expression f = parse("x0 / (x1 - x1)", 2);
  EXPECT_TRUE(std::isnan(at(f, {1.0, 2.0})));
}

TEST(Parse, VariableOutOfRange) {
  try {
    parse("x5", 2);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("out of range"), std::string::npos);
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 1);
  }
}

TEST(Parse, ReportsLineAndColumn) {
  try {
    parse("x0 +\n  * x1", 2);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
}

TEST(Parse, RejectsUnknownFunctionAndBadArity) {
  EXPECT_THROW(parse("tan(x0)", 1), ParseError);
  EXPECT_THROW(parse("max(x0)", 1), ParseError);
  EXPECT_THROW(parse("sin(x0, x0)", 1), ParseError);
  EXPECT_THROW(parse("x0 ^ 1.5", 1), ParseError);
  EXPECT_THROW(parse("", 1), ParseError);
  EXPECT_THROW(parse("(x0", 1), ParseError);
  EXPECT_THROW(parse("x0 x0", 1), ParseError);
}

TEST(Parse, PrecedenceAndAssociativity) {
  EXPECT_DOUBLE_EQ(at(parse("2 - 3 - 4", 1), {0.0}), -5.0);
  EXPECT_DOUBLE_EQ(at(parse("8 / 4 / 2", 1), {0.0}), 1.0);
  EXPECT_DOUBLE_EQ(at(parse("-x0^2", 1), {3.0}), -9.0);
  EXPECT_DOUBLE_EQ(at(parse("2 * x0 ^ 3 + 1", 1), {2.0}), 17.0);
  EXPECT_DOUBLE_EQ(at(parse("x0 ^ -2", 1), {2.0}), 0.25);
  EXPECT_DOUBLE_EQ(at(parse("1e-1 * 20", 1), {0.0}), 2.0);
}

TEST(Unparse, IdempotentOnRandomExpressions) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const Expr e = i % 2 ? oracle::random_rough_expr(rng, 3, 4) : oracle::random_smooth_expr(rng, 3, 4);
    const Expression first = parse(unparse(e), 3);
    const Expression second = parse(unparse(first), 3);
    ASSERT_TRUE(structurally_equal(first.body(), second.body())) << unparse(e);
  }
}

TEST(Unparse, KeepsNegativeConstantsAndPowers) {
  for (const char* text : {"x0 - -2", "(-2) ^ 2", "x0 ^ -3", "-(x0 - x1)", "x0 - (x1 - 2)",
                           "x0 / (x1 * 2)", "max(-x0, min(x1, 3))"}) {
    const Expression f = parse(text, 2);
    const Expression g = parse(unparse(f), 2);
    EXPECT_TRUE(structurally_equal(f.body(), g.body())) << text << " -> " << unparse(f);
    EXPECT_EQ(at(f, {1.25, -0.5}), at(g, {1.25, -0.5})) << text;
  }
}

TEST(Eval, Examples) {
  EXPECT_EQ(at(parse("x0*x1 + 2", 2), {3.0, 4.0}), 14.0);
  for (std::size_t n : {1u, 2u, 10u, 50u}) {
    EXPECT_NEAR(eval(make_ackley(n).function, std::vector<double>(n, 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(eval(make_levy(n).function, std::vector<double>(n, 1.0)), 0.0, 1e-12);
  }
}

TEST(Eval, UndefinedOperationsGiveNaN) {
  EXPECT_TRUE(std::isnan(at(parse("log(x0)", 1), {0.0})));
  EXPECT_TRUE(std::isnan(at(parse("log(x0)", 1), {-1.0})));
  EXPECT_TRUE(std::isnan(at(parse("sqrt(x0)", 1), {-1e-9})));
  EXPECT_TRUE(std::isnan(at(parse("1 / x0", 1), {0.0})));
  EXPECT_TRUE(std::isnan(at(parse("x0 ^ -1", 1), {0.0})));
  EXPECT_EQ(at(parse("sqrt(x0)", 1), {0.0}), 0.0);
}

TEST(Eval, DimensionMismatchThrows) {
  const Expression f = parse("x0 + x1", 2);
  EXPECT_THROW(at(f, {1.0}), std::invalid_argument);
}

TEST(Eval, NeverThrowsOnFiniteInput) {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const Expression f(oracle::random_rough_expr(rng, 2, 5), 2);
    std::vector<double> x{oracle::uniform(rng, -5, 5), oracle::uniform(rng, -5, 5)};
    EXPECT_NO_THROW(eval(f, x));
  }
}

TEST(Expression, RejectsOutOfRangeVariables) {
  EXPECT_THROW(Expression(x1, 1), std::invalid_argument);
  EXPECT_THROW(Expression(x0, 0), std::invalid_argument);
}

TEST(Gradient, Examples) {
  {
    const Expression f = parse("x0^2", 1);
    const GradientVector g = gradient(f);
    ASSERT_EQ(g.size(), 1u);
    EXPECT_DOUBLE_EQ(eval(Expression(g.components[0], 1), std::vector{1.5}), 3.0);
    EXPECT_FALSE(g.has_kinks);
  }
  {
    const Expression f = parse("sin(x0) * x1", 2);
    const GradientVector g = gradient(f);
    const std::vector<double> x{0.4, -1.7};
    EXPECT_DOUBLE_EQ(eval(Expression(g.components[0], 2), x), std::cos(0.4) * -1.7);
    EXPECT_DOUBLE_EQ(eval(Expression(g.components[1], 2), x), std::sin(0.4));
  }
}

TEST(Gradient, AckleyMatchesCentralDifference) {
  const Expression f = make_ackley(2).function;
  const GradientVector g = gradient(f);
  const std::vector<double> x{0.5, -0.3};
  const auto fn = as_fn(f);
  for (std::size_t d = 0; d < 2; ++d) {
    const double symbolic = eval(Expression(g.components[d], 2), x);
    const double numeric = central_first(fn, x, d, 1e-5);
    EXPECT_LT(std::fabs(symbolic - numeric) / std::fabs(symbolic), 1e-6) << d;
  }
}

TEST(Gradient, KinkConventions) {
  const Expression a = parse("abs(x0)", 1);
  const Expression ga(gradient(a).components[0], 1);
  EXPECT_TRUE(gradient(a).has_kinks);
  EXPECT_EQ(at(ga, {0.0}), 0.0);
  EXPECT_EQ(at(ga, {-2.0}), -1.0);
  EXPECT_EQ(at(ga, {2.0}), 1.0);

  const Expression m = parse("max(x0, x1)", 2);
  const GradientVector gm = gradient(m);
  EXPECT_EQ(eval(Expression(gm.components[0], 2), std::vector{1.0, 1.0}), 1.0);
  EXPECT_EQ(eval(Expression(gm.components[1], 2), std::vector{1.0, 1.0}), 0.0);

  const Expression n = parse("min(x0, x1)", 2);
  const GradientVector gn = gradient(n);
  EXPECT_EQ(eval(Expression(gn.components[0], 2), std::vector{1.0, 1.0}), 1.0);
  EXPECT_EQ(eval(Expression(gn.components[1], 2), std::vector{1.0, 1.0}), 0.0);
  EXPECT_EQ(eval(Expression(gn.components[1], 2), std::vector{2.0, 1.0}), 1.0);
}

TEST(Hessian, Examples) {
  const HessianDiagonal cube = hessian_diagonal(parse("x0^3", 1));
  EXPECT_DOUBLE_EQ(eval(Expression(cube.components[0], 1), std::vector{0.7}), 6.0 * 0.7);

  const HessianDiagonal bilinear = hessian_diagonal(parse("x0 * x1", 2));
  for (const Expr& c : bilinear.components) EXPECT_TRUE(c.is_constant(0.0));
}

TEST(Hessian, LevyMatchesSecondDifference) {
  const Expression f = make_levy(3).function;
  const HessianDiagonal h = hessian_diagonal(f);
  const std::vector<double> x{0.2, 0.7, -1.1};
  const auto fn = as_fn(f);
  for (std::size_t d = 0; d < 3; ++d) {
    const double symbolic = eval(Expression(h.components[d], 3), x);
    const double numeric = central_second(fn, x, d);
    EXPECT_LT(std::fabs(symbolic - numeric) / std::max(1.0, std::fabs(symbolic)), 1e-4) << d;
  }
}

TEST(Gradient, SoundOnRandomSmoothExpressions) {
  Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + i % 3;
    const Expression f(oracle::random_smooth_expr(rng, n, 4), n);
    Objective obj(f);
    std::vector<double> x(n);
    for (double& v : x) v = oracle::uniform(rng, -2.0, 2.0);
    std::vector<double> g(n), h(n);
    obj.gradient(x, g);
    obj.hessian_diagonal(x, h);
    const auto fn = as_fn(f);
    for (std::size_t d = 0; d < n; ++d) {
      const double fd = central_first(fn, x, d);
      EXPECT_LT(std::fabs(g[d] - fd) / std::max(1.0, std::fabs(g[d])), 1e-5) << unparse(f);
      const double fd2 = central_second(fn, x, d);
      EXPECT_LT(std::fabs(h[d] - fd2) / std::max(1.0, std::fabs(h[d])), 1e-4) << unparse(f);
    }
  }
}

TEST(Program, SharesCommonSubexpressions) {
  const Expr u = sin(x0 * x1);
  const Expr e = u * u + u;
  const Program p = Program::compile(Expression(e, 2));
  EXPECT_EQ(p.size(), 6u);  // x0, x1, mul, sin, mul, add
  std::vector<double> scratch;
  const std::vector<double> x{0.3, 2.0};
  const double s = std::sin(0.6);
  EXPECT_DOUBLE_EQ(p.evaluate(x, scratch), s * s + s);
}

TEST(ReluNet, SingleUnitIsMax) {
  ReluNetWeights w{1, 1, {{1.0}}, {0.0}, {1.0}, 0.0};
  const Expression f = relu_net_to_expression(w);
  EXPECT_EQ(unparse(f), "max(0, x0)");
  EXPECT_EQ(at(f, {-2.0}), 0.0);
  EXPECT_EQ(at(f, {2.5}), 2.5);
}

TEST(ReluNet, TwoUnitsGiveAbs) {
  ReluNetWeights w{1, 2, {{1.0}, {-1.0}}, {0.0, 0.0}, {1.0, 1.0}, 0.0};
  const Expression f = relu_net_to_expression(w);
  EXPECT_EQ(at(f, {-3.0}), 3.0);
  EXPECT_EQ(at(f, {1.5}), 1.5);
}

TEST(ReluNet, MatchesForwardPassExactly) {
  Rng rng(99);
  ReluNetWeights w;
  w.inputs = 2;
  w.hidden = 4;
  for (std::size_t j = 0; j < w.hidden; ++j) {
    w.W1.push_back({oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)});
    w.b1.push_back(oracle::uniform(rng, -1, 1));
    w.w2.push_back(oracle::uniform(rng, -1, 1));
  }
  w.b2 = oracle::uniform(rng, -1, 1);
  Objective f(relu_net_to_expression(w));
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x{oracle::uniform(rng, -2, 2), oracle::uniform(rng, -2, 2)};
    EXPECT_EQ(f.value(x), forward(w, x));
  }
}

TEST(ReluNet, HessianIsZeroAwayFromKinks) {
  ReluNetWeights w{2, 2, {{1.0, -0.5}, {0.25, 2.0}}, {0.1, -0.3}, {1.5, -0.7}, 0.2};
  Objective f(relu_net_to_expression(w));
  EXPECT_TRUE(f.has_kinks());
  std::vector<double> h(2);
  f.hessian_diagonal(std::vector{0.3, 0.9}, h);
  EXPECT_EQ(h[0], 0.0);
  EXPECT_EQ(h[1], 0.0);
}

TEST(ReluNet, RejectsBadShapes) {
  ReluNetWeights w{2, 1, {{1.0}}, {0.0}, {1.0}, 0.0};
  EXPECT_THROW(relu_net_to_expression(w), std::invalid_argument);
  ReluNetWeights nan{1, 1, {{std::nan("")}}, {0.0}, {1.0}, 0.0};
  EXPECT_THROW(relu_net_to_expression(nan), std::invalid_argument);
}

TEST(ReluNet, JsonRoundTrip) {
  ReluNetWeights w{2, 2, {{1.0, -0.5}, {0.25, 2.0}}, {0.1, -0.3}, {1.5, -0.7}, 0.2};
  const ReluNetWeights back = relu_net_from_json(to_json(w));
  EXPECT_EQ(back.W1, w.W1);
  EXPECT_EQ(back.b1, w.b1);
  EXPECT_EQ(back.w2, w.w2);
  EXPECT_EQ(back.b2, w.b2);
  EXPECT_THROW(relu_net_from_json(nlohmann::json{{"n", 1}}), std::invalid_argument);
}
