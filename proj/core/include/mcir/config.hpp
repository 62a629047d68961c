#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

namespace mcir {

/// Hyperparameters and budgets of one search run.
///
/// Optional counts left unset are resolved against the problem dimension:
/// `num_children` to 10 / 20 / 30 for n <= 50 / n <= 100 / larger n, and
/// `grad_samples` to n + 1. Unset budgets are unlimited, but at least one of
/// the three budgets must be set.
struct SearchConfig {
  double c_lb = 50.0;
  double c_v = 0.5;
  double c_x = 0.5;
  std::optional<std::size_t> num_children;
  std::uint64_t local_opt_budget = 50;
  /// Relative-improvement stop for the local optimizer.
  double local_opt_min_improvement = 1e-12;
  double delta_fraction = 0.1;
  std::optional<std::size_t> grad_samples;
  std::size_t root_child_cap = 64;

  std::optional<std::uint64_t> step_budget = 1000;
  std::optional<std::uint64_t> eval_budget;
  std::optional<double> wall_clock_budget_ms;
  /// Stop as soon as the best value is <= target_value.
  std::optional<double> target_value;

  std::uint64_t seed = 0;
  /// When false, traces report 0 ms so that files are byte-reproducible.
  bool record_wall_clock = true;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  std::size_t children_for(std::size_t dims) const;
  std::size_t grad_samples_for(std::size_t dims) const;
};

/// Table of defaults used when `num_children` is not given.
std::size_t default_num_children(std::size_t dims);

/// Reads a config object. Unknown keys, wrong types and out-of-range values
/// throw std::invalid_argument. An object with a "config" member (a run
/// summary written by this library) is accepted and that member is used.
SearchConfig config_from_json(const nlohmann::json& j);

/// Fully resolved config for a problem of dimension `dims`.
nlohmann::json to_json(const SearchConfig& config, std::size_t dims);

/// Parses a JSON file with config_from_json.
SearchConfig load_config(const std::filesystem::path& path);

}  // namespace mcir
