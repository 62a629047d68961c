#include <benchmark/benchmark.h>

#include "mcir/bound.hpp"
#include "mcir/local_opt.hpp"
#include "mcir/objective.hpp"
#include "mcir/optimize.hpp"
#include "mcir/problems.hpp"

using namespace mcir;

namespace {

BenchmarkProblem problem(int which, std::size_t n) {
  static const char* names[] = {"ackley", "levy", "michalewicz"};
  return make_problem(names[which], n);
}

void BM_Value(benchmark::State& state) {
  const BenchmarkProblem p = problem(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  Objective f(p.function);
  Rng rng(1);
  const auto x = sample_uniform(p.domain, rng);
  for (auto _ : state) benchmark::DoNotOptimize(f.value(x));
  state.SetLabel(p.name);
}
BENCHMARK(BM_Value)->ArgsProduct({{0, 1, 2}, {10, 100}});

void BM_Gradient(benchmark::State& state) {
  const BenchmarkProblem p = problem(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  Objective f(p.function);
  Rng rng(1);
  const auto x = sample_uniform(p.domain, rng);
  std::vector<double> g(p.dims());
  for (auto _ : state) {
    f.gradient(x, g);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetLabel(p.name);
}
BENCHMARK(BM_Gradient)->ArgsProduct({{0, 1, 2}, {10, 100}});

void BM_HessianDiagonal(benchmark::State& state) {
  const BenchmarkProblem p = problem(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  Objective f(p.function);
  Rng rng(1);
  const auto x = sample_uniform(p.domain, rng);
  std::vector<double> h(p.dims());
  for (auto _ : state) {
    f.hessian_diagonal(x, h);
    benchmark::DoNotOptimize(h.data());
  }
  state.SetLabel(p.name);
}
BENCHMARK(BM_HessianDiagonal)->ArgsProduct({{0, 1, 2}, {10, 100}});

void BM_LowerBound(benchmark::State& state) {
  const BenchmarkProblem p = problem(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  Objective f(p.function);
  for (auto _ : state) benchmark::DoNotOptimize(f.lower_bound(p.domain));
  state.SetLabel(p.name);
}
BENCHMARK(BM_LowerBound)->ArgsProduct({{0, 1, 2}, {10, 100}});

void BM_Partition(benchmark::State& state) {
  const BoxDomain box = BoxDomain::cube(static_cast<std::size_t>(state.range(1)), -1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(partition(box, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Partition)->ArgsProduct({{10, 30}, {10, 100}});

void BM_LocalOpt(benchmark::State& state) {
  const BenchmarkProblem p = problem(static_cast<int>(state.range(0)), 10);
  Objective f(p.function);
  Rng rng(1);
  for (auto _ : state) {
    const auto x0 = sample_uniform(p.domain, rng);
    benchmark::DoNotOptimize(local_opt(f, x0, p.domain, 50).y);
  }
  state.SetLabel(p.name);
}
BENCHMARK(BM_LocalOpt)->DenseRange(0, 2);

void BM_SearchSteps(benchmark::State& state) {
  const BenchmarkProblem p = problem(static_cast<int>(state.range(0)), 10);
  SearchConfig c;
  c.step_budget = 100;
  for (auto _ : state) benchmark::DoNotOptimize(optimize(p.function, p.domain, c).best_y);
  state.SetItemsProcessed(state.iterations() * 100);
  state.SetLabel(p.name + " x100 steps");
}
BENCHMARK(BM_SearchSteps)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
