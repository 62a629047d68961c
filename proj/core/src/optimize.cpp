#include "mcir/optimize.hpp"

#include <chrono>
#include <stdexcept>

#include "mcir/objective.hpp"

namespace mcir {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Steps: return "steps";
    case Termination::Evaluations: return "evals";
    case Termination::WallClock: return "wall-clock";
    case Termination::Target: return "target";
  }
  return "?";
}

SearchResult optimize(const Expression& f, const BoxDomain& omega, const SearchConfig& config,
                      const StepObserver& observer) {
  config.validate();
  if (f.dims() != omega.dims()) {
    throw std::invalid_argument("optimize: expression has " + std::to_string(f.dims()) +
                                " dimension(s) but the domain has " + std::to_string(omega.dims()));
  }
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };

  Objective objective(f);
  SearchTree tree(objective, omega, config);
  Rng rng(config.seed);

  SearchResult result;
  for (std::uint64_t step = 1;; ++step) {
    if (config.step_budget && step > *config.step_budget) {
      result.termination = Termination::Steps;
      break;
    }
    if (config.eval_budget && objective.evaluations() >= *config.eval_budget) {
      result.termination = Termination::Evaluations;
      break;
    }
    if (config.wall_clock_budget_ms && elapsed_ms() >= *config.wall_clock_budget_ms) {
      result.termination = Termination::WallClock;
      break;
    }

    const NodeId leaf = tree.select();
    const std::vector<NodeId> children = tree.expand(leaf, rng);
    tree.learn(children, rng);
    tree.backup(leaf);
    tree.prune_root();

    TraceRecord record;
    record.step = step;
    record.evaluations = objective.evaluations();
    record.wall_ms = config.record_wall_clock ? elapsed_ms() : 0.0;
    record.best_y = tree.root().y;
    result.trace.push_back(record);
    result.steps = step;
    if (observer) observer(tree, record);

    if (config.target_value && record.best_y <= *config.target_value) {
      result.termination = Termination::Target;
      break;
    }
  }

  result.best_x = tree.root().x;
  result.best_y = tree.root().y;
  result.evaluations = objective.evaluations();
  result.learn = tree.learn_stats();
  result.tree_nodes = tree.live_nodes();
  return result;
}

}  // namespace mcir
