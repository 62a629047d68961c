#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcir/config.hpp"
#include "mcir/optimize.hpp"
#include "mcir/problems.hpp"

namespace mcir {

/// Per-step mean and population standard deviation of the best-found value
/// across seeds.
struct AggregateCurve {
  std::string name;
  std::size_t dims = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> steps;
  std::vector<double> mean;
  std::vector<double> std;
};

/// At each step s in 1..max_last_step, every run contributes its best value
/// at its latest recorded step <= s. Throws if `traces` is empty or a trace
/// is empty.
AggregateCurve aggregate(const std::string& name, std::size_t dims,
                         std::span<const std::uint64_t> seeds,
                         std::span<const std::vector<TraceRecord>> traces);

/// `step,evals,wall_ms,best_y` with a header row.
std::string format_trace_csv(std::span<const TraceRecord> trace);
std::vector<TraceRecord> parse_trace_csv(const std::string& text);
void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> trace);

nlohmann::json to_json(const AggregateCurve& curve, const nlohmann::json& config);
nlohmann::json run_summary(const std::string& name, const SearchResult& result,
                           const nlohmann::json& config);

/// Writes text to `path`, throwing std::runtime_error naming the path.
void write_file(const std::filesystem::path& path, const std::string& text);

struct SuiteOptions {
  std::filesystem::path out_dir = ".";
  std::size_t jobs = 1;
};

struct SuiteRun {
  std::string problem;
  std::uint64_t seed = 0;
  SearchResult result;
  std::filesystem::path trace_path;
};

struct SuiteReport {
  std::vector<SuiteRun> runs;
  std::vector<AggregateCurve> curves;
};

/// Runs optimize for every (problem, seed) with up to `jobs` worker threads.
/// Writes `<name>_seed<k>.csv` and `<name>_seed<k>.json` per run and
/// `<name>_aggregate.json` per problem into `out_dir`.
SuiteReport run_suite(std::span<const BenchmarkProblem> problems, const SearchConfig& config,
                      std::span<const std::uint64_t> seeds, const SuiteOptions& options = {});

}  // namespace mcir
