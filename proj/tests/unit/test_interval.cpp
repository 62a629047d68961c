#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mcir/bound.hpp"
#include "mcir/interval.hpp"
#include "mcir/objective.hpp"
#include "mcir/problems.hpp"
#include "oracles.hpp"

using namespace mcir;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

BoxDomain box1(double lo, double hi) { return BoxDomain({Interval(lo, hi)}); }

}  // namespace

TEST(Interval, EvenPowerOverSignChange) {
  const Interval r = eval_interval(parse("x0^2", 1), box1(-1, 2));
  EXPECT_EQ(r.lo, 0.0);
  EXPECT_NEAR(r.hi, 4.0, 1e-12);
  EXPECT_GE(r.hi, 4.0);
}

TEST(Interval, OddAndNegativePowers) {
  const Interval cube = pow(Interval(-2, 3), 3);
  EXPECT_LE(cube.lo, -8.0);
  EXPECT_GE(cube.hi, 27.0);
  const Interval inv = pow(Interval(2, 4), -1);
  EXPECT_LE(inv.lo, 0.25);
  EXPECT_GE(inv.hi, 0.5);
  const Interval across = pow(Interval(-1, 1), -2);
  EXPECT_EQ(across.hi, kInf);
  EXPECT_EQ(pow(Interval(-3, 5), 0), Interval::point(1.0));
}

TEST(Interval, SinDetectsCriticalPoints) {
  const Interval r = eval_interval(parse("sin(x0)", 1), box1(0, kPi));
  EXPECT_NEAR(r.lo, 0.0, 1e-12);
  EXPECT_NEAR(r.hi, 1.0, 1e-12);
  EXPECT_LE(r.lo, 0.0);
  EXPECT_GE(r.hi, 1.0);

  const Interval narrow = sin(Interval(0.1, 0.2));
  EXPECT_LT(narrow.hi, 0.2);
  EXPECT_GT(narrow.lo, 0.09);

  const Interval c = cos(Interval(-0.5, 4.0));
  EXPECT_EQ(c.hi, 1.0);
  EXPECT_EQ(c.lo, -1.0);
  EXPECT_EQ(sin(Interval(-100, 100)), Interval(-1, 1));
}

TEST(Interval, MonotoneFunctions) {
  const Interval e = exp(Interval(0, 1));
  EXPECT_LE(e.lo, 1.0);
  EXPECT_GE(e.hi, std::numbers::e);
  const Interval l = log(Interval(0, 1));
  EXPECT_EQ(l.lo, -kInf);
  EXPECT_FALSE(l.poisoned);
  EXPECT_TRUE(log(Interval(-2, -1)).poisoned);
  EXPECT_TRUE(sqrt(Interval(-2, -1)).poisoned);
  const Interval s = sqrt(Interval(-1, 4));
  EXPECT_EQ(s.lo, 0.0);
  EXPECT_GE(s.hi, 2.0);
  EXPECT_EQ(abs(Interval(-3, 2)).lo, 0.0);
  EXPECT_EQ(abs(Interval(-3, 2)).hi, 3.0);
  EXPECT_EQ(abs(Interval(-3, -2)).lo, 2.0);
}

TEST(Interval, DivisionByZeroContainingInterval) {
  const Interval whole = Interval(1, 2) / Interval(-1, 1);
  EXPECT_EQ(whole.lo, -kInf);
  EXPECT_EQ(whole.hi, kInf);
  EXPECT_FALSE(whole.poisoned);
  const Interval half = Interval(1, 2) / Interval(0, 1);
  EXPECT_GE(half.lo, 0.99);
  EXPECT_EQ(half.hi, kInf);
  EXPECT_TRUE((Interval(1, 2) / Interval(0, 0)).poisoned);
}

TEST(Interval, PoisonPropagates) {
  const Interval p = Interval::poison();
  EXPECT_TRUE((p + Interval(1, 2)).poisoned);
  EXPECT_TRUE(sin(p).poisoned);
  EXPECT_TRUE(max(Interval(0, 1), p).poisoned);
  EXPECT_EQ(lower_bound(parse("log(x0 - 5)", 1), box1(0, 1)), -kBoundClamp);
}

TEST(Interval, MaxMinSignStep) {
  EXPECT_EQ(max(Interval(-1, 2), Interval(0, 1)), Interval(0, 2));
  EXPECT_EQ(min(Interval(-1, 2), Interval(0, 1)), Interval(-1, 1));
  EXPECT_EQ(sign(Interval(-1, 2)), Interval(-1, 1));
  EXPECT_EQ(sign(Interval(0, 2)), Interval(0, 1));
  EXPECT_EQ(step(Interval(-1, -0.5)), Interval(0, 0));
  EXPECT_EQ(step(Interval(0, 1)), Interval(1, 1));
}

TEST(LowerBound, Examples) {
  EXPECT_EQ(lower_bound(parse("5", 1), box1(-3, 7)), 5.0);
  EXPECT_EQ(lower_bound(parse("x0^2", 1), box1(-1, 2)), 0.0);
  EXPECT_EQ(lower_bound(parse("1 / x0", 1), box1(-1, 1)), -1e12);
  EXPECT_EQ(clamp_bound(-kInf), -kBoundClamp);
  EXPECT_EQ(clamp_bound(kInf), kBoundClamp);
}

TEST(LowerBound, AckleyBelowGridMinimum) {
  const Expression f = make_ackley(2).function;
  const BoxDomain box = BoxDomain::cube(2, -1, 1);
  const Interval r = eval_interval(f, box);
  EXPECT_LE(r.lo, 0.0);
  EXPECT_GE(r.hi, 0.0);
  Objective obj(f);
  const double grid = oracle::grid_min_2d([&](std::span<const double> x) { return obj.value(x); }, box, 101);
  EXPECT_LE(r.lo, grid);
}

TEST(LowerBound, BuiltinProblemsBoundTheirOptimum) {
  for (const std::string& name : builtin_problem_names()) {
    const BenchmarkProblem p = make_problem(name, 5);
    const double lb = lower_bound(p.function, p.domain);
    if (p.known_value) {
      EXPECT_LE(lb, *p.known_value) << name;
    }
    EXPECT_GE(lb, -kBoundClamp);
  }
  const BenchmarkProblem m = make_michalewicz(4);
  EXPECT_GE(lower_bound(m.function, m.domain), -4.0 - 1e-9);
}

TEST(Interval, SoundOnRandomExpressions) {
  Rng rng(7);
  std::size_t checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const std::size_t n = 1 + i % 3;
    const Expression f(oracle::random_rough_expr(rng, n, 4), n);
    const BoxDomain box = oracle::random_box(rng, n, 3.0);
    Objective obj(f);
    const Interval r = obj.bound(box);
    const double lb = obj.lower_bound(box);
    for (int k = 0; k < 8; ++k) {
      const std::vector<double> x = sample_uniform(box, rng);
      const double y = obj.value(x);
      if (std::isnan(y)) continue;
      ++checked;
      ASSERT_TRUE(r.contains(y)) << unparse(f) << " y=" << y << " I=" << r;
      ASSERT_LE(lb, std::max(y, -kBoundClamp)) << unparse(f);
    }
  }
  EXPECT_GT(checked, 5000u);
}

// A poisoned inner result means the inner box has no defined point; it is
// skipped since there is no range to compare.
TEST(Interval, InclusionIsotone) {
  Rng rng(8);
  std::size_t compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + i % 3;
    const Expression f(oracle::random_rough_expr(rng, n, 4), n);
    const BoxDomain outer = oracle::random_box(rng, n, 3.0);
    std::vector<Interval> inner_sides;
    for (std::size_t d = 0; d < n; ++d) {
      double a = oracle::uniform(rng, outer.lower(d), outer.upper(d));
      double b = oracle::uniform(rng, outer.lower(d), outer.upper(d));
      if (a > b) std::swap(a, b);
      inner_sides.emplace_back(a, b);
    }
    const BoxDomain inner(inner_sides);
    const Interval big = eval_interval(f, outer);
    const Interval small = eval_interval(f, inner);
    if (big.poisoned || small.poisoned) continue;
    ++compared;
    const double slack_lo = 1e-12 * (1.0 + std::fabs(big.lo));
    const double slack_hi = 1e-12 * (1.0 + std::fabs(big.hi));
    EXPECT_GE(small.lo, big.lo - slack_lo) << unparse(f);
    EXPECT_LE(small.hi, big.hi + slack_hi) << unparse(f);
  }
  EXPECT_GT(compared, 500u);
}
