#include "mcir/suite.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mcir {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string fixed3(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 3);
  return std::string(buf, ptr);
}

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

AggregateCurve aggregate(const std::string& name, std::size_t dims,
                         std::span<const std::uint64_t> seeds,
                         std::span<const std::vector<TraceRecord>> traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
  std::uint64_t first = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t last = 0;
  for (const auto& t : traces) {
    if (t.empty()) throw std::invalid_argument("aggregate: empty trace");
    first = std::min(first, t.front().step);
    last = std::max(last, t.back().step);
  }

  AggregateCurve curve;
  curve.name = name;
  curve.dims = dims;
  curve.seeds.assign(seeds.begin(), seeds.end());
  std::vector<std::size_t> cursor(traces.size(), 0);
  const double runs = static_cast<double>(traces.size());
  for (std::uint64_t s = first; s <= last; ++s) {
    double sum = 0.0;
    std::size_t contributing = 0;
    for (std::size_t r = 0; r < traces.size(); ++r) {
      const auto& t = traces[r];
      while (cursor[r] + 1 < t.size() && t[cursor[r] + 1].step <= s) ++cursor[r];
      if (t[cursor[r]].step > s) continue;
      const double v = t[cursor[r]].best_y;
      sum += v;
      ++contributing;
    }
    if (contributing != traces.size()) continue;
    const double mean = sum / runs;
    double var = 0.0;
    for (std::size_t r = 0; r < traces.size(); ++r) {
      const double d = traces[r][cursor[r]].best_y - mean;
      var += d * d;
    }
    curve.steps.push_back(s);
    curve.mean.push_back(mean);
    curve.std.push_back(std::sqrt(var / runs));
  }
  return curve;
}

std::string format_trace_csv(std::span<const TraceRecord> trace) {
  std::string out = "step,evals,wall_ms,best_y\n";
  for (const TraceRecord& r : trace) {
    out += std::to_string(r.step);
    out += ',';
    out += std::to_string(r.evaluations);
    out += ',';
    out += fixed3(r.wall_ms);
    out += ',';
    out += shortest(r.best_y);
    out += '\n';
  }
  return out;
}

std::vector<TraceRecord> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "step,evals,wall_ms,best_y") {
    throw std::invalid_argument("trace CSV: missing header");
  }
  std::vector<TraceRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TraceRecord r;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 4) throw std::invalid_argument("trace CSV: expected 4 columns: " + line);
    r.step = std::stoull(fields[0]);
    r.evaluations = std::stoull(fields[1]);
    r.wall_ms = std::stod(fields[2]);
    r.best_y = std::stod(fields[3]);
    trace.push_back(r);
  }
  return trace;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("error writing " + path.string());
}

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> trace) {
  write_file(path, format_trace_csv(trace));
}

nlohmann::json to_json(const AggregateCurve& curve, const nlohmann::json& config) {
  nlohmann::json mean = nlohmann::json::array();
  for (double v : curve.mean) mean.push_back(finite_or_null(v));
  nlohmann::json std_dev = nlohmann::json::array();
  for (double v : curve.std) std_dev.push_back(finite_or_null(v));
  return {{"name", curve.name},
          {"dims", curve.dims},
          {"seeds", curve.seeds},
          {"steps", curve.steps},
          {"mean", std::move(mean)},
          {"std", std::move(std_dev)},
          {"std_convention", "population"},
          {"config", config}};
}

nlohmann::json run_summary(const std::string& name, const SearchResult& result,
                           const nlohmann::json& config) {
  return {{"name", name},
          {"best_y", finite_or_null(result.best_y)},
          {"best_x", result.best_x},
          {"evaluations", result.evaluations},
          {"steps", result.steps},
          {"termination", std::string(to_string(result.termination))},
          {"learn",
           {{"invocations", result.learn.invocations},
            {"nodes_created", result.learn.nodes_created},
            {"skipped", result.learn.skipped},
            {"gradient_only", result.learn.gradient_only}}},
          {"config", config}};
}

SuiteReport run_suite(std::span<const BenchmarkProblem> problems, const SearchConfig& config,
                      std::span<const std::uint64_t> seeds, const SuiteOptions& options) {
  if (seeds.empty()) throw std::invalid_argument("run_suite: no seeds");
  config.validate();
  std::filesystem::create_directories(options.out_dir);

  SuiteReport report;
  for (const BenchmarkProblem& p : problems) {
    for (std::uint64_t seed : seeds) {
      SuiteRun run;
      run.problem = p.name;
      run.seed = seed;
      run.trace_path = options.out_dir / (p.name + "_seed" + std::to_string(seed) + ".csv");
      report.runs.push_back(std::move(run));
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < report.runs.size(); i = next++) {
      try {
        SuiteRun& run = report.runs[i];
        const BenchmarkProblem& p = problems[i / seeds.size()];
        SearchConfig c = config;
        c.seed = run.seed;
        run.result = optimize(p.function, p.domain, c);
        write_trace_csv(run.trace_path, run.result.trace);
        std::filesystem::path summary = run.trace_path;
        summary.replace_extension(".json");
        write_file(summary, run_summary(p.name, run.result, to_json(c, p.dims())).dump(2) + "\n");
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, report.runs.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t pi = 0; pi < problems.size(); ++pi) {
    const BenchmarkProblem& p = problems[pi];
    std::vector<std::vector<TraceRecord>> traces;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      traces.push_back(report.runs[pi * seeds.size() + s].result.trace);
    }
    AggregateCurve curve = aggregate(p.name, p.dims(), seeds, traces);
    nlohmann::json echoed = to_json(config, p.dims());
    echoed.erase("seed");
    write_file(options.out_dir / (p.name + "_aggregate.json"), to_json(curve, echoed).dump(2) + "\n");
    report.curves.push_back(std::move(curve));
  }
  return report;
}

}  // namespace mcir
