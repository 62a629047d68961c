#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "mcir/box.hpp"
#include "mcir/config.hpp"
#include "mcir/expr.hpp"
#include "mcir/tree.hpp"

namespace mcir {

enum class Termination { Steps, Evaluations, WallClock, Target };

std::string_view to_string(Termination t);

struct TraceRecord {
  std::uint64_t step = 0;
  std::uint64_t evaluations = 0;
  double wall_ms = 0.0;
  double best_y = 0.0;
};

struct SearchResult {
  std::vector<double> best_x;
  double best_y = 0.0;
  std::uint64_t evaluations = 0;
  std::uint64_t steps = 0;
  std::vector<TraceRecord> trace;
  Termination termination = Termination::Steps;
  LearnStats learn;
  std::size_t tree_nodes = 0;
};

/// Called after every completed step with the tree and the new trace record.
using StepObserver = std::function<void(const SearchTree&, const TraceRecord&)>;

/// Runs select -> expand -> learn -> backup -> prune until a budget fires.
///
/// Budgets are checked before each step, so the evaluation budget may be
/// overrun by at most one step's worth. Given the same inputs and a run
/// bounded by steps or evaluations, the trace is identical apart from wall_ms.
///
/// Throws std::invalid_argument on an invalid config or dimension mismatch.
SearchResult optimize(const Expression& f, const BoxDomain& omega, const SearchConfig& config,
                      const StepObserver& observer = {});

}  // namespace mcir
